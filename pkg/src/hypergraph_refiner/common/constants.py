"""通用数值常量。"""

LAYER_NORM_EPS: float = 1e-5
BCE_CLAMP: float = 1e-7
AGGREGATION_EPS: float = 1e-8
GEOMETRY_TOL: float = 1e-9
SYMMETRY_TOL: float = 1e-9
DECODE_THRESHOLD: float = 0.5

ADAM_BETA1: float = 0.9
ADAM_BETA2: float = 0.999
ADAM_EPS: float = 1e-8

CHECKPOINT_MAGIC: bytes = b"HRF1"
DATASET_MAGIC: str = "#HSET v1"

MAX_RESAMPLE_ATTEMPTS: int = 100
