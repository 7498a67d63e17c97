# 三幂等分解引擎 模块导出

# 使用绝对导入来避免相对导入问题
from core.zmod import Modulus, Residue, make_modulus, scalar_trinil_decompose
from core.matkit import MatZ, MatGF, is_nilpotent, is_tripotent
from core.canon import frobenius_form, coprime_split_block
from core.fieldsplit import split_field_matrix, split_gf2_block, split_gf3_block
from core.lift import newton_idempotent_lift, tripotent_lift_3adic, idempotent_lift_2adic
from core.engine import TrinilCertificate, TriangularInput, decompose, decompose_batch, decompose_triangular, verify
from modules.lab import classify_zm, oracle_decompose
from modules.reproductions import run_reproductions
from services.document_service import DocumentService
from services.decomposition_service import DecompositionService
from main import TrinilSystem, get_system, decompose_rows, verify_file

__all__ = [
    'Modulus',
    'Residue',
    'make_modulus',
    'scalar_trinil_decompose',
    'MatZ',
    'MatGF',
    'is_nilpotent',
    'is_tripotent',
    'frobenius_form',
    'coprime_split_block',
    'split_field_matrix',
    'split_gf2_block',
    'split_gf3_block',
    'newton_idempotent_lift',
    'tripotent_lift_3adic',
    'idempotent_lift_2adic',
    'TrinilCertificate',
    'TriangularInput',
    'decompose',
    'decompose_batch',
    'decompose_triangular',
    'verify',
    'classify_zm',
    'oracle_decompose',
    'run_reproductions',
    'DocumentService',
    'DecompositionService',
    'TrinilSystem',
    'get_system',
    'decompose_rows',
    'verify_file'
]
