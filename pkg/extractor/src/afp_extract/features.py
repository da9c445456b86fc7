"""Batch feature extraction with stock image backbones.

Two branches per frame: the 2048-d global-average-pooled penultimate
output of a ResNet-50 classifier, and the 512-d projected image embedding
of a CLIP ViT-B/32 vision encoder. Weights come from the usual model hubs;
`weights="random"` builds seeded randomly-initialized networks of the same
geometry for offline smoke tests (the manifest records which was used).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .errors import ModelError

RESNET_ID = "torchvision/resnet50-IMAGENET1K_V2"
CLIP_ID = "openai/clip-vit-base-patch32"

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)
CLIP_MEAN = (0.48145466, 0.4578275, 0.40821073)
CLIP_STD = (0.26862954, 0.26130258, 0.27577711)


@dataclass
class FeatureModels:
    resnet_backbone: torch.nn.Module
    clip_model: torch.nn.Module
    weights: str

    def provenance(self) -> dict:
        return {
            "resnet": RESNET_ID,
            "resnet_layer": "global-average-pooled penultimate (2048-d)",
            "clip": CLIP_ID,
            "weights": self.weights,
        }


def load_feature_models(weights: str = "pretrained", seed: int = 0) -> FeatureModels:
    """Build both encoders in eval mode on CPU.

    weights="pretrained" pulls the published checkpoints (raises ModelError
    when they cannot be obtained, e.g. offline with a cold cache);
    weights="random" builds seeded random-initialized twins.
    """
    import torchvision
    from transformers import CLIPVisionConfig, CLIPVisionModelWithProjection

    if weights not in ("pretrained", "random"):
        raise ModelError(f"weights must be 'pretrained' or 'random', got {weights!r}")

    torch.manual_seed(seed)
    if weights == "pretrained":
        try:
            resnet = torchvision.models.resnet50(
                weights=torchvision.models.ResNet50_Weights.IMAGENET1K_V2
            )
            clip = CLIPVisionModelWithProjection.from_pretrained(CLIP_ID)
        except Exception as exc:  # hub/cache/IO failures all mean the same thing here
            raise ModelError(
                f"pretrained weights unavailable ({exc}); fetch them once with network "
                "access or run with weights='random' for a smoke test"
            ) from exc
    else:
        resnet = torchvision.models.resnet50(weights=None)
        clip = CLIPVisionModelWithProjection(CLIPVisionConfig())

    backbone = torch.nn.Sequential(*list(resnet.children())[:-1]).eval()
    clip = clip.eval()
    for param in backbone.parameters():
        param.requires_grad_(False)
    for param in clip.parameters():
        param.requires_grad_(False)
    return FeatureModels(resnet_backbone=backbone, clip_model=clip, weights=weights)


def _preprocess(frames_rgb: list[np.ndarray], mean, std) -> torch.Tensor:
    """uint8 RGB frames -> normalized NCHW float batch at 224x224."""
    batch = torch.from_numpy(np.stack(frames_rgb)).permute(0, 3, 1, 2).float() / 255.0
    batch = torch.nn.functional.interpolate(
        batch, size=(224, 224), mode="bilinear", align_corners=False, antialias=True
    )
    mean_t = torch.tensor(mean).view(1, 3, 1, 1)
    std_t = torch.tensor(std).view(1, 3, 1, 1)
    return (batch - mean_t) / std_t


def compute_features(models: FeatureModels, frames_rgb: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """(n, 2048) ResNet features and (n, 512) CLIP image embeddings."""
    with torch.no_grad():
        resnet_in = _preprocess(frames_rgb, IMAGENET_MEAN, IMAGENET_STD)
        resnet_out = models.resnet_backbone(resnet_in).flatten(1)
        clip_in = _preprocess(frames_rgb, CLIP_MEAN, CLIP_STD)
        clip_out = models.clip_model(pixel_values=clip_in).image_embeds
    return resnet_out.numpy().astype(np.float64), clip_out.numpy().astype(np.float64)
