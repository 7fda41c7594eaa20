// Client for the extraction service. Three endpoints, nothing else:
//   GET  /healthz      -> model status + checkpoint hash
//   POST /api/extract  -> all candidate curves and scores for an image
//   POST /api/export   -> CSV bytes for chosen curves + calibration
//
// Curve values are passed through untouched in both directions; every
// unit conversion happens on the server so a CSV exported here is
// byte-identical to one exported from the command line.

export type ScaleKind = "linear" | "log";

export interface Calibration {
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
  x_scale: ScaleKind;
  y_scale: ScaleKind;
}

export interface ExtractResponse {
  curves: number[][];
  scores: number[];
  image_id: string;
  grid_n: number;
}

export interface HealthResponse {
  status: string;
  checkpoint?: string;
}

// Validation failures answer 400 with {"detail": {"field", "message"}};
// other failures carry a plain detail string. Both land here.
export class ApiError extends Error {
  status: number;
  field?: string;

  constructor(status: number, message: string, field?: string) {
    super(message);
    this.status = status;
    this.field = field;
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let message = `HTTP ${resp.status}`;
  let field: string | undefined;
  try {
    const body = await resp.json();
    if (body && typeof body.detail === "object" && body.detail !== null) {
      field = body.detail.field;
      message = body.detail.message ?? message;
    } else if (body && typeof body.detail === "string") {
      message = body.detail;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(resp.status, message, field);
}

export class ApiClient {
  baseUrl: string;
  private inflight: AbortController | null = null;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async health(): Promise<HealthResponse> {
    const resp = await fetch(this.baseUrl + "/healthz");
    return (await resp.json()) as HealthResponse;
  }

  // At most one extraction runs at a time: a new upload aborts the
  // previous request before it can clobber newer state.
  async extract(image: Blob, filename = "plot.png"): Promise<ExtractResponse> {
    if (this.inflight) this.inflight.abort();
    const controller = new AbortController();
    this.inflight = controller;

    const form = new FormData();
    form.append("image", image, filename);
    try {
      const resp = await fetch(this.baseUrl + "/api/extract", {
        method: "POST",
        body: form,
        signal: controller.signal,
      });
      await raiseForStatus(resp);
      return (await resp.json()) as ExtractResponse;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  async exportCsv(curves: number[][], calibration: Calibration): Promise<Blob> {
    const resp = await fetch(this.baseUrl + "/api/export", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ curves, calibration }),
    });
    await raiseForStatus(resp);
    return await resp.blob();
  }
}
