"""
文档服务 - 矩阵文档与证书的解析、渲染和异步读写

矩阵文档：
    文本  第一行 "mod <m> n <n>"，随后 n 行，每行 n 个整数
    JSON  {"m": m, "n": n, "entries": [行优先的 n·n 个整数]}
证书：
    JSON  {"format": "trinil-certificate", "version": 1, ...}，sort_keys + indent=2
    文本  "trinil-certificate 1" 开头的分节格式
"""

import asyncio
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import aiofiles

from core.engine import CertificateChecks, CHECK_ORDER, TrinilCertificate
from core.errors import DocumentParseError, ModulusOutOfRange, TrinilError
from core.matkit import MatGF, MatZ
from core.zmod import Modulus, make_modulus

logger = logging.getLogger(__name__)

CERTIFICATE_FORMAT = "trinil-certificate"
CERTIFICATE_VERSION = 1

FORMATS = ("json", "text")


@dataclass(frozen=True)
class MatrixDocument:
    """ℤ_m 上的一个 n×n 矩阵（entries 行优先，已约化到 [0, m)）"""

    m: int
    n: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DocumentParseError(f"维数必须 ≥ 1，收到 {self.n}")
        if len(self.entries) != self.n * self.n:
            raise DocumentParseError(f"需要 {self.n * self.n} 个元素，收到 {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(int(x) % self.m for x in self.entries))

    def rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.n:(i + 1) * self.n]) for i in range(self.n)]

    def to_matrix(self) -> MatZ:
        return MatZ.from_rows(self.rows(), self.m)

    @classmethod
    def from_matrix(cls, A: MatZ) -> "MatrixDocument":
        return cls(m=A.m, n=A.n, entries=tuple(x for row in A.to_rows() for x in row))


def _is_json(text: str) -> bool:
    return text.lstrip().startswith("{")


def _to_int(token, what: str, source: Optional[str]) -> int:
    if isinstance(token, bool):
        raise DocumentParseError(f"{what} 不是整数: {token!r}", source)
    try:
        return int(token)
    except (TypeError, ValueError):
        raise DocumentParseError(f"{what} 不是整数: {token!r}", source) from None


def _checked_modulus(m: int, source: Optional[str]) -> Modulus:
    try:
        return make_modulus(m)
    except ModulusOutOfRange as e:
        raise DocumentParseError(str(e), source) from None


def _content_lines(text: str) -> List[str]:
    return [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]


def _parse_header(line: str, source: Optional[str]) -> Tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 4 or tokens[0] != "mod" or tokens[2] != "n":
        raise DocumentParseError(f"首行应为 'mod <m> n <n>'，收到 {line!r}", source)
    return _to_int(tokens[1], "模数", source), _to_int(tokens[3], "维数", source)


def _parse_rows(lines: List[str], n: int, what: str, source: Optional[str]) -> List[int]:
    if len(lines) < n:
        raise DocumentParseError(f"{what} 需要 {n} 行，只有 {len(lines)} 行", source)
    entries = []
    for i, line in enumerate(lines[:n]):
        tokens = line.split()
        if len(tokens) != n:
            raise DocumentParseError(f"{what} 第 {i + 1} 行需要 {n} 个元素，收到 {len(tokens)}", source)
        entries.extend(_to_int(t, f"{what} 元素", source) for t in tokens)
    return entries


def parse_matrix_document(
    text: str, source: Optional[str] = None, modulus_override: Optional[int] = None
) -> MatrixDocument:
    """解析文本或 JSON 矩阵文档（按首个非空字符是否为 '{' 区分）

    Args:
        text: 文档内容
        source: 来源名称（出现在错误消息中）
        modulus_override: 覆盖文档中的模数

    Returns:
        MatrixDocument

    Raises:
        DocumentParseError: 格式错误、元素个数不对或模数超出范围
    """
    if _is_json(text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentParseError(f"JSON 解析失败: {e}", source) from None
        if not isinstance(data, dict) or not {"m", "n", "entries"} <= data.keys():
            raise DocumentParseError("JSON 矩阵文档需要字段 m, n, entries", source)
        if not isinstance(data["entries"], list):
            raise DocumentParseError("entries 必须是整数列表", source)
        m = _to_int(data["m"], "模数", source)
        n = _to_int(data["n"], "维数", source)
        entries = [_to_int(x, "元素", source) for x in data["entries"]]
    else:
        lines = _content_lines(text)
        if not lines:
            raise DocumentParseError("空文档", source)
        m, n = _parse_header(lines[0], source)
        if n < 1:
            raise DocumentParseError(f"维数必须 ≥ 1，收到 {n}", source)
        if len(lines) - 1 != n:
            raise DocumentParseError(f"需要 {n} 行矩阵，收到 {len(lines) - 1} 行", source)
        entries = _parse_rows(lines[1:], n, "矩阵", source)

    if modulus_override is not None:
        m = modulus_override
    _checked_modulus(m, source)
    try:
        return MatrixDocument(m=m, n=n, entries=tuple(entries))
    except DocumentParseError as e:
        raise DocumentParseError(str(e), source) from None


def render_matrix_document(doc: MatrixDocument, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"m": doc.m, "n": doc.n, "entries": list(doc.entries)}, sort_keys=True, indent=2) + "\n"
    lines = [f"mod {doc.m} n {doc.n}"] + [" ".join(str(x) for x in row) for row in doc.rows()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# 证书
# ---------------------------------------------------------------------------

def certificate_to_dict(cert: TrinilCertificate) -> dict:
    return {
        "format": CERTIFICATE_FORMAT,
        "version": CERTIFICATE_VERSION,
        "kind": cert.kind,
        "m": cert.A.m,
        "n": cert.n,
        "seed": cert.seed,
        "nilpotency_exponent": cert.nilpotency_exponent,
        "A": cert.A.to_rows(),
        "E": cert.E.to_rows(),
        "W": cert.W.to_rows(),
        "checks": cert.checks.to_dict(),
        "provenance": list(cert.provenance),
        "field_idempotent": cert.field_idempotent.to_rows() if cert.field_idempotent is not None else None,
        "field_tripotent": cert.field_tripotent.to_rows() if cert.field_tripotent is not None else None,
        "two_adic_idempotent": cert.two_adic_idempotent,
    }


def _rows_text(name: str, rows: Iterable[Iterable[int]]) -> List[str]:
    return [name] + [" ".join(str(x) for x in row) for row in rows]


def _flag(value: Optional[bool]) -> str:
    return "none" if value is None else str(value).lower()


def render_certificate(cert: TrinilCertificate, fmt: str = "json") -> str:
    """证书渲染；同一证书总是得到字节相同的输出"""
    if fmt == "json":
        return json.dumps(certificate_to_dict(cert), sort_keys=True, indent=2) + "\n"

    lines = [
        f"{CERTIFICATE_FORMAT} {CERTIFICATE_VERSION}",
        f"kind {cert.kind}",
        f"mod {cert.A.m} n {cert.n}",
        f"seed {cert.seed}",
        f"exponent {cert.nilpotency_exponent}",
        " ".join(["provenance"] + list(cert.provenance)),
        " ".join(["checks"] + [f"{k}={_flag(v)}" for k, v in cert.checks.to_dict().items()]),
        f"two_adic_idempotent {_flag(cert.two_adic_idempotent)}",
    ]
    lines += _rows_text("A", cert.A.to_rows())
    lines += _rows_text("E", cert.E.to_rows())
    lines += _rows_text("W", cert.W.to_rows())
    if cert.field_idempotent is not None:
        lines += _rows_text("field_idempotent", cert.field_idempotent.to_rows())
    if cert.field_tripotent is not None:
        lines += _rows_text("field_tripotent", cert.field_tripotent.to_rows())
    return "\n".join(lines) + "\n"


def _parse_flag(token: str, source: Optional[str]) -> Optional[bool]:
    table = {"true": True, "false": False, "none": None}
    if token not in table:
        raise DocumentParseError(f"无法识别的布尔值: {token!r}", source)
    return table[token]


def _square(rows, n: int, what: str, source: Optional[str]) -> List[List[int]]:
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise DocumentParseError(f"{what} 必须是 {n}×{n} 矩阵", source)
    return [[_to_int(x, f"{what} 元素", source) for x in row] for row in rows]


def _field_matrix(rows, p: int, n: int, what: str, source: Optional[str]) -> Optional[MatGF]:
    if rows is None:
        return None
    return MatGF(p, _square(rows, n, what, source))


def _certificate_from_fields(fields: dict, source: Optional[str]) -> TrinilCertificate:
    if fields.get("format") != CERTIFICATE_FORMAT:
        raise DocumentParseError(f"不是证书文档 (format={fields.get('format')!r})", source)
    if fields.get("version") != CERTIFICATE_VERSION:
        raise DocumentParseError(f"不支持的证书版本 {fields.get('version')!r}", source)
    try:
        n = _to_int(fields["n"], "维数", source)
        modulus = _checked_modulus(_to_int(fields["m"], "模数", source), source)
        mats = {name: MatZ(modulus, _square(fields[name], n, name, source)) for name in ("A", "E", "W")}
        checks_raw = fields["checks"]
        if not isinstance(checks_raw, dict) or set(checks_raw) != set(CHECK_ORDER):
            raise DocumentParseError(f"checks 需要字段 {CHECK_ORDER}", source)
        provenance = fields.get("provenance") or []
        if not isinstance(provenance, list):
            raise DocumentParseError("provenance 必须是列表", source)
        return TrinilCertificate(
            A=mats["A"],
            E=mats["E"],
            W=mats["W"],
            nilpotency_exponent=_to_int(fields["nilpotency_exponent"], "幂零指数", source),
            checks=CertificateChecks(**{k: bool(v) for k, v in checks_raw.items()}),
            provenance=tuple(str(p) for p in provenance),
            seed=_to_int(fields.get("seed", 0), "种子", source),
            kind=str(fields.get("kind", "general")),
            field_idempotent=_field_matrix(fields.get("field_idempotent"), 2, n, "field_idempotent", source),
            field_tripotent=_field_matrix(fields.get("field_tripotent"), 3, n, "field_tripotent", source),
            two_adic_idempotent=fields.get("two_adic_idempotent"),
        )
    except KeyError as e:
        raise DocumentParseError(f"缺少字段 {e.args[0]}", source) from None
    except DocumentParseError:
        raise
    except TrinilError as e:
        raise DocumentParseError(str(e), source) from None


def _parse_certificate_text(text: str, source: Optional[str]) -> dict:
    lines = _content_lines(text)
    if not lines:
        raise DocumentParseError("空文档", source)
    head = lines[0].split()
    if len(head) != 2:
        raise DocumentParseError(f"无法识别的证书首行 {lines[0]!r}", source)
    fields: dict = {"format": head[0], "version": _to_int(head[1], "版本", source)}

    i = 1
    n = None
    while i < len(lines):
        tokens = lines[i].split()
        key = tokens[0]
        if key == "mod":
            m, n = _parse_header(lines[i], source)
            fields.update(m=m, n=n)
            i += 1
        elif key in ("kind", "seed", "exponent", "two_adic_idempotent") and len(tokens) == 2:
            value = tokens[1]
            if key == "exponent":
                fields["nilpotency_exponent"] = value
            elif key == "two_adic_idempotent":
                fields[key] = _parse_flag(value, source)
            else:
                fields[key] = value
            i += 1
        elif key == "provenance":
            fields["provenance"] = tokens[1:]
            i += 1
        elif key == "checks":
            checks = {}
            for token in tokens[1:]:
                name, _, value = token.partition("=")
                checks[name] = _parse_flag(value, source)
            fields["checks"] = checks
            i += 1
        elif key in ("A", "E", "W", "field_idempotent", "field_tripotent") and len(tokens) == 1:
            if n is None:
                raise DocumentParseError(f"{key} 出现在 'mod <m> n <n>' 之前", source)
            flat = _parse_rows(lines[i + 1:], n, key, source)
            fields[key] = [flat[r * n:(r + 1) * n] for r in range(n)]
            i += 1 + n
        else:
            raise DocumentParseError(f"无法识别的证书行 {lines[i]!r}", source)
    return fields


def parse_certificate(text: str, source: Optional[str] = None) -> TrinilCertificate:
    """解析 JSON 或文本证书

    存储的 checks 只是记录，verify 会重新计算。

    Raises:
        DocumentParseError: 格式错误或字段缺失
    """
    if _is_json(text):
        try:
            fields = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentParseError(f"JSON 解析失败: {e}", source) from None
        if not isinstance(fields, dict):
            raise DocumentParseError("证书必须是 JSON 对象", source)
    else:
        fields = _parse_certificate_text(text, source)
    return _certificate_from_fields(fields, source)


# ---------------------------------------------------------------------------
# 异步读写
# ---------------------------------------------------------------------------

class DocumentService:
    """文档服务：路径为 None 或 "-" 时使用 stdin / stdout"""

    def __init__(self, encoding: str = "utf-8"):
        """初始化文档服务

        Args:
            encoding: 文件编码
        """
        self.encoding = encoding

    @staticmethod
    def _is_stream(path: Optional[str]) -> bool:
        return path is None or str(path) == "-"

    async def read_text(self, path: Optional[str]) -> str:
        """读取文件或 stdin

        Raises:
            DocumentParseError: 文件不存在或不可读
        """
        if self._is_stream(path):
            return await asyncio.to_thread(sys.stdin.read)
        try:
            async with aiofiles.open(path, "r", encoding=self.encoding) as f:
                return await f.read()
        except (OSError, UnicodeDecodeError) as e:
            raise DocumentParseError(f"无法读取: {e}", str(path)) from None

    async def write_text(self, path: Optional[str], text: str) -> dict:
        """写入文件或 stdout

        Returns:
            写入结果
        """
        if self._is_stream(path):
            sys.stdout.write(text)
            sys.stdout.flush()
            return {"success": True, "path": "-", "bytes": len(text.encode(self.encoding))}

        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(target, "w", encoding=self.encoding) as f:
            await f.write(text)
        logger.info(f"💾 已写入 {target}")
        return {"success": True, "path": str(target), "bytes": len(text.encode(self.encoding))}

    async def load_matrix(self, path: Optional[str], modulus_override: Optional[int] = None) -> MatrixDocument:
        text = await self.read_text(path)
        return parse_matrix_document(text, source=self._source(path), modulus_override=modulus_override)

    async def load_certificate(self, path: Optional[str]) -> TrinilCertificate:
        text = await self.read_text(path)
        return parse_certificate(text, source=self._source(path))

    async def save_certificate(self, path: Optional[str], cert: TrinilCertificate, fmt: str = "json") -> dict:
        return await self.write_text(path, render_certificate(cert, fmt))

    def _source(self, path: Optional[str]) -> str:
        return "<stdin>" if self._is_stream(path) else str(path)
