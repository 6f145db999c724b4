from enum import Enum, IntEnum

class VerdictLabel(Enum):
    NOT_Z = "NotZ"
    Z_NOT_M = "ZNotM"
    M = "M"
    STRONG_M = "StrongM"
    CERTIFIED_NO = "CertifiedNo"
    NO_COUNTEREXAMPLE_FOUND = "NoCounterexampleFound"
    YES = "Yes"

class TensorClass(Enum):
    M = "m"
    STRONG_M = "strong-m"
    P = "p"
    P0 = "p0"
    PSD = "psd"
    PD = "pd"

class TensorFileFormat(Enum):
    DENSE = "dense"
    COO = "coo"

class TensorKind(Enum):
    ZERO = "zero"
    IDENTITY = "identity"
    ONES = "ones"
    RANDOM_NONNEG = "random-nonneg"
    RANDOM_Z = "random-z"
    RANDOM_HULL = "random-hull"

class MatrixClass(Enum):
    P = "P"
    P0 = "P0"
    NEITHER = "Neither"

class CertificateKind(Enum):
    PSD_VIOLATION = "psd_violation"
    PD_VIOLATION = "pd_violation"
    P_VIOLATION = "p_violation"
    P0_VIOLATION = "p0_violation"
    NOT_Z = "not_z"
    NOT_STRONG_M = "not_strong_m"
    NOT_M = "not_m"
    STRONG_M = "strong_m"
    Z_TENSOR = "z_tensor"
    HULL_MEMBER = "hull_member"

class ExitCode(IntEnum):
    OK = 0
    ERROR = 1
    CERTIFIED_NO = 2
    INCONCLUSIVE = 3

# M-class labels ordered from weakest to strongest
M_CLASS_RANK = {
    VerdictLabel.NOT_Z: 0,
    VerdictLabel.Z_NOT_M: 1,
    VerdictLabel.M: 2,
    VerdictLabel.STRONG_M: 3,
}

TOOL_NAME = "tenshull"
TOOL_VERSION = "1.0.0"
