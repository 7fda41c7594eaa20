"""Shared fixtures: fast generator config, small architecture, tiny corpus."""

import numpy as np
import pytest
import torch

from apexnet.corpus import GeneratorConfig, generate_corpus
from apexnet.model import ApexNet, ArchitectureConfig, save_checkpoint

# Narrow resolution range keeps rendering cheap in unit tests.
SMALL_GEN = GeneratorConfig(
    width_range=(256, 384),
    aspect_range=(0.6, 1.0),
    dpi_range=(80, 100),
)

# Six pooled blocks take a 64px input down to 1x1.
SMALL_ARCH = ArchitectureConfig(
    input_size=64,
    blocks=((8, True), (16, True), (16, True), (32, True), (32, True), (32, True)),
)


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    """10 examples: 8 train, 2 test."""
    out = tmp_path_factory.mktemp("tiny_corpus")
    manifest = generate_corpus(10, base_seed=1234, out_dir=out, config=SMALL_GEN)
    return manifest


@pytest.fixture(scope="session")
def scored_checkpoint(tmp_path_factory):
    """Small model whose score head is pinned to known descending scores.

    Score-head weights are zeroed and biases fixed, so every image yields
    the same score vector while curves still depend on the input.
    """
    torch.manual_seed(7)
    model = ApexNet(SMALL_ARCH)
    with torch.no_grad():
        model.score_head.weight.zero_()
        biases = np.linspace(3.0, 0.6, SMALL_ARCH.max_plots)
        model.score_head.bias.copy_(torch.tensor(biases, dtype=torch.float32))
    path = tmp_path_factory.mktemp("ckpt") / "scored.ckpt"
    save_checkpoint(path, model, meta={"purpose": "test"})
    return path
