"""hdrtvkit: HDR/WCG frame statistics, SDR degradation models, and paired
dataset preparation for HDR television content."""

__version__ = "0.1.0"

from .errors import ContractError, DomainError, LutParseError
from .frame import (
    GAMMA_BT709,
    LINEAR_BT2020,
    LINEAR_BT709,
    PQ_BT2020,
    ChromaticityPoint,
    ColorEncoding,
    GamutTriangle,
    PixelFrame,
    Primaries,
    Transfer,
)
from .color import (
    BT709_GAMUT,
    BT2020_GAMUT,
    CST_2020_TO_709,
    D65,
    encode,
    encoded_luma,
    linearize,
    luminance,
    pq_eotf,
    pq_inverse_eotf,
    rgb_to_ictcp,
    rgb_to_xyz,
    rgb_to_ycbcr709,
    sdr_eotf,
    sdr_oetf,
    xyz_to_xy,
)
from .degrade import (
    BT2446C_1000_TO_100,
    DegradationKind,
    DegradationSpec,
    ToneCurve2446C,
    apply_degradation,
    dm_2446c_gm,
    dm_hc_gm,
    dm_lut,
    dm_reinhard,
    gamut_map_hard,
    jpeg_roundtrip,
    tm_2446c,
)
from .lumseg import SegMaskPair, segment
from .lut import Lut3D, identity_lut, lut_apply, parse_cube, write_cube
from .metrics import (
    METRIC_ORDER,
    STYLE_METRICS,
    VOLUME_METRICS,
    ComparisonReport,
    MetricVector,
    all_,
    asl,
    average_vector,
    cf,
    compare,
    delta_e_itp,
    ehl,
    ewg,
    fhlp,
    foep,
    fwgp,
    metric_vector,
    metrics_csv_text,
    metrics_json_dict,
    psnr,
    recovery_rate,
    shift_rate,
    si,
    stdl,
    write_metrics_csv,
    write_metrics_json,
)
from .frameio import decode_image, encode_image
from .pipeline import PipelineConfig, derive_seed, prepare

__all__ = [name for name in dir() if not name.startswith("_")]
