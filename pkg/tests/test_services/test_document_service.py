# Tests - Document Service
import pytest
import json
import os
import sys
import tempfile

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from core.engine import decompose, decompose_triangular, TriangularInput, verify
from core.errors import DocumentParseError
from core.matkit import MatZ
from core.zmod import make_modulus
from services.document_service import (
    DocumentService,
    MatrixDocument,
    certificate_to_dict,
    parse_certificate,
    parse_matrix_document,
    render_certificate,
    render_matrix_document,
)


@pytest.fixture
def workdir():
    """创建临时目录"""
    with tempfile.TemporaryDirectory() as path:
        yield path


@pytest.fixture
def service():
    return DocumentService()


@pytest.fixture
def certificate():
    return decompose(MatZ.from_rows([[5, 7], [11, 1]], 12), seed=2)


class TestMatrixDocuments:
    """测试矩阵文档解析"""

    def test_text(self):
        """测试文本格式与注释行"""
        doc = parse_matrix_document("# 示例\nmod 12 n 2\n1 1\n1 0\n")
        assert doc == MatrixDocument(m=12, n=2, entries=(1, 1, 1, 0))
        assert doc.to_matrix() == MatZ.from_rows([[1, 1], [1, 0]], 12)

    def test_json(self):
        doc = parse_matrix_document('{"m": 6, "n": 2, "entries": [7, -1, 0, 3]}')
        assert doc.entries == (1, 5, 0, 3)

    def test_modulus_override(self):
        doc = parse_matrix_document("mod 12 n 1\n7\n", modulus_override=6)
        assert doc.m == 6
        assert doc.entries == (1,)

    def test_wrong_entry_count(self):
        """测试元素个数不对"""
        with pytest.raises(DocumentParseError):
            parse_matrix_document("mod 12 n 2\n1 1\n1\n")
        with pytest.raises(DocumentParseError):
            parse_matrix_document('{"m": 6, "n": 2, "entries": [1, 2, 3]}')

    def test_bad_header(self):
        with pytest.raises(DocumentParseError):
            parse_matrix_document("modulus 12\n1\n")

    def test_non_integer(self):
        with pytest.raises(DocumentParseError) as info:
            parse_matrix_document("mod 12 n 1\nx\n", source="a.txt")
        assert "a.txt" in str(info.value)

    def test_modulus_out_of_range(self):
        with pytest.raises(DocumentParseError):
            parse_matrix_document("mod 1 n 1\n0\n")

    def test_inadmissible_modulus_parses(self):
        """测试不可接受模数在解析阶段放行，由分解入口拒绝"""
        assert parse_matrix_document("mod 10 n 1\n3\n").m == 10

    def test_render_roundtrip(self):
        doc = MatrixDocument(m=72, n=2, entries=(1, 2, 3, 4))
        for fmt in ("text", "json"):
            assert parse_matrix_document(render_matrix_document(doc, fmt)) == doc


class TestCertificates:
    """测试证书渲染与解析"""

    def test_json_layout(self, certificate):
        data = json.loads(render_certificate(certificate, "json"))
        assert data["format"] == "trinil-certificate"
        assert data["version"] == 1
        assert data["m"] == 12
        assert data["seed"] == 2
        assert data == certificate_to_dict(certificate)

    def test_byte_identical(self, certificate):
        """测试同一证书的输出字节相同"""
        again = decompose(MatZ.from_rows([[5, 7], [11, 1]], 12), seed=2)
        for fmt in ("json", "text"):
            assert render_certificate(certificate, fmt) == render_certificate(again, fmt)

    @pytest.mark.parametrize("fmt", ["json", "text"])
    def test_roundtrip_verifies(self, certificate, fmt):
        """测试渲染再解析后的证书仍然通过复核"""
        parsed = parse_certificate(render_certificate(certificate, fmt))
        assert parsed.E == certificate.E
        assert parsed.provenance == certificate.provenance
        assert parsed.field_tripotent == certificate.field_tripotent
        assert verify(parsed).accepted

    def test_triangular_text(self):
        cert = decompose_triangular(TriangularInput(make_modulus(12), (7, 2, 0)))
        parsed = parse_certificate(render_certificate(cert, "text"))
        assert parsed.kind == "triangular"
        assert parsed.field_idempotent is None
        assert verify(parsed).accepted

    def test_truncated(self, certificate):
        """测试截断的证书"""
        text = render_certificate(certificate, "text")
        with pytest.raises(DocumentParseError):
            parse_certificate("\n".join(text.splitlines()[:-7]))
        with pytest.raises(DocumentParseError):
            parse_certificate(render_certificate(certificate, "json")[:-20])

    def test_wrong_format_tag(self):
        with pytest.raises(DocumentParseError):
            parse_certificate('{"format": "other", "version": 1}')

    def test_missing_field(self, certificate):
        data = certificate_to_dict(certificate)
        del data["W"]
        with pytest.raises(DocumentParseError) as info:
            parse_certificate(json.dumps(data))
        assert "W" in str(info.value)


class TestDocumentService:
    """测试异步读写"""

    @pytest.mark.asyncio
    async def test_write_and_read(self, service, workdir):
        path = os.path.join(workdir, "nested", "a.txt")
        result = await service.write_text(path, "mod 6 n 1\n5\n")
        assert result["success"] is True
        assert result["bytes"] == len("mod 6 n 1\n5\n")
        doc = await service.load_matrix(path)
        assert doc.entries == (5,)

    @pytest.mark.asyncio
    async def test_certificate_file(self, service, workdir, certificate):
        """测试证书写入后重新读出"""
        path = os.path.join(workdir, "cert.json")
        await service.save_certificate(path, certificate, "json")
        loaded = await service.load_certificate(path)
        assert loaded.W == certificate.W
        assert verify(loaded).accepted

    @pytest.mark.asyncio
    async def test_missing_file(self, service, workdir):
        with pytest.raises(DocumentParseError):
            await service.load_matrix(os.path.join(workdir, "missing.txt"))

    @pytest.mark.asyncio
    async def test_stdout(self, service, capsys):
        result = await service.write_text("-", "hello\n")
        assert result["path"] == "-"
        assert capsys.readouterr().out == "hello\n"
