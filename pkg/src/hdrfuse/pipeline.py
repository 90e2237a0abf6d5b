"""End-to-end bracket fusion."""
from __future__ import annotations

from dataclasses import dataclass

from hdrfuse.chroma import chroma_weights, fuse_chroma, saturation
from hdrfuse.clustering import ClusterMaps, cluster_luminance
from hdrfuse.exposure import TARGET_GRAY
from hdrfuse.guided import GuidedFilterParams
from hdrfuse.image_core import ImageRGB, ImageYCbCr, check_same_shape, rgb_to_ycbcr, ycbcr_to_rgb
from hdrfuse.luminance import SolverParams, fuse_luminance

FAST_S_G = 3


@dataclass(frozen=True)
class FusionConfig:
    s_lambda: float = 2.0
    guided_r: int = 1
    guided_eps: float = 1.0
    s_g: int = 0
    target_gray: float = TARGET_GRAY

    @classmethod
    def fast(cls, **kw) -> FusionConfig:
        return cls(s_g=FAST_S_G, **kw)

    @property
    def guided(self) -> GuidedFilterParams:
        return GuidedFilterParams(r=self.guided_r, eps=self.guided_eps, s_g=self.s_g)

    @property
    def solver(self) -> SolverParams:
        return SolverParams(s_lambda=self.s_lambda)


def fuse_bracket(ue: ImageYCbCr, ne: ImageYCbCr, oe: ImageYCbCr, maps: ClusterMaps,
                 cfg: FusionConfig = FusionConfig(), rgb=None) -> ImageYCbCr:
    """Fuse a YCbCr bracket given cluster maps of the reference frame.

    ``rgb`` optionally supplies the (ue, ne, oe) RGB frames for the saturation
    weights; otherwise they are reconstructed from YCbCr. The fused Y is
    left unclamped.
    """
    check_same_shape(ue.y, ne.y, oe.y, maps.r_ue)
    y = fuse_luminance(ue.y, ne.y, oe.y, maps, cfg.guided, cfg.solver)
    if rgb is None:
        rgb = [ycbcr_to_rgb(im) for im in (ue, ne, oe)]
    w = chroma_weights(*(saturation(im) for im in rgb))
    cb, cr = fuse_chroma(w, ue.cb, ne.cb, oe.cb, ue.cr, ne.cr, oe.cr)
    return ImageYCbCr(y, cb, cr)


def fuse_images(ue: ImageRGB, ne: ImageRGB, oe: ImageRGB, cfg: FusionConfig = FusionConfig(),
                maps: ClusterMaps | None = None) -> ImageRGB:
    """Fuse an RGB bracket. Without explicit maps, the normal exposure's
    luminance stands in for the auto-exposed reference frame."""
    check_same_shape(ue.r, ne.r, oe.r)
    ycc = [rgb_to_ycbcr(im) for im in (ue, ne, oe)]
    if maps is None:
        maps = cluster_luminance(ycc[1].y)
    fused = fuse_bracket(*ycc, maps, cfg, rgb=(ue, ne, oe))
    return ycbcr_to_rgb(fused)
