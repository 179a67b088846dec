"""
Camada de infraestrutura para arquivos do FracLab.

Formatos:
    - campo "fraclab-field v1": cabeçalho
      ``# fraclab-field v1 n=<n> N=<N> L=<L> periodic=<0|1>`` seguido de N^n
      valores float64 decimais, um por linha, em ordem row-major. Os valores
      são gravados com ``%.17g``, o que garante ida e volta bit a bit;
    - medida: uma linha ``x1 ... xn peso`` por átomo (``#`` comenta);
    - células: uma linha ``i1 ... in`` (multi-índice de célula) por célula;
    - relatórios: JSON com indentação fixa e chaves na ordem de inserção.
"""

from pathlib import Path
from typing import List, Union
import json
import math
import re

import numpy as np

from core.exceptions import FieldFormatError
from core.models import Grid, ScalarField, VectorField, DiscreteMeasure, DyadicSet

FIELD_MAGIC = "fraclab-field v1"

_HEADER = re.compile(
    r"^#\s*fraclab-field v1\s+n=(\d+)\s+N=(\d+)\s+L=(\S+)\s+periodic=([01])\s*$"
)

PathLike = Union[str, Path]


def _read_lines(path: PathLike) -> List[str]:
    path = Path(path)
    if not path.is_file():
        raise FieldFormatError(str(path), 0, "arquivo nao encontrado")
    with open(path, "r", encoding="utf-8") as f:
        return f.read().splitlines()


def format_header(grid: Grid) -> str:
    """Cabeçalho de arquivo de campo para um grid."""
    return f"# {FIELD_MAGIC} n={grid.n} N={grid.N} L={grid.L!r} periodic={int(grid.periodic)}"


def write_field(field: ScalarField, path: PathLike) -> str:
    """
    Grava um campo no formato fraclab-field v1.

    Returns:
        str: Caminho gravado.
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    lines = [format_header(field.grid)]
    lines.extend("%.17g" % v for v in field.flat)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return str(path)


def read_field(path: PathLike) -> ScalarField:
    """
    Lê um campo fraclab-field v1.

    Raises:
        FieldFormatError: Cabeçalho ausente ou inválido, contagem de valores
            diferente de N^n, valor não numérico ou não finito.
    """
    from core.grid import make_grid
    from core.exceptions import InvalidGridError

    lines = _read_lines(path)
    if not lines:
        raise FieldFormatError(str(path), 1, "arquivo vazio")
    match = _HEADER.match(lines[0].strip())
    if not match:
        raise FieldFormatError(str(path), 1, "cabecalho fraclab-field v1 ausente ou invalido")
    try:
        grid = make_grid(int(match.group(1)), int(match.group(2)), float(match.group(3)),
                         match.group(4) == "1")
    except (ValueError, InvalidGridError) as e:
        raise FieldFormatError(str(path), 1, f"grid invalido: {e}")

    values = np.empty(grid.size, dtype=np.float64)
    count = 0
    for number, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        if count >= grid.size:
            raise FieldFormatError(str(path), number, f"mais de {grid.size} valores")
        try:
            value = float(text)
        except ValueError:
            raise FieldFormatError(str(path), number, f"valor nao numerico '{text}'")
        if not math.isfinite(value):
            raise FieldFormatError(str(path), number, "valor nao finito")
        values[count] = value
        count += 1
    if count != grid.size:
        raise FieldFormatError(str(path), len(lines), f"{count} valores, esperados {grid.size}")
    return ScalarField(grid, values)


def component_path(path: PathLike, j: int) -> Path:
    """Caminho da componente j de uma saída vetorial: <stem>_<j><suffix>."""
    path = Path(path)
    return path.with_name(f"{path.stem}_{j}{path.suffix}")


def write_vector_field(field: VectorField, path: PathLike) -> List[str]:
    """Grava um arquivo por componente."""
    return [write_field(field.component(j), component_path(path, j)) for j in range(field.grid.n)]


def read_measure(path: PathLike) -> DiscreteMeasure:
    """
    Lê uma medida discreta (linhas ``x1 ... xn peso``).

    Raises:
        FieldFormatError: Linha com número de colunas inconsistente, valor
            não numérico ou peso negativo.
    """
    rows = []
    width = None
    for number, raw in enumerate(_read_lines(path), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            row = [float(x) for x in text.split()]
        except ValueError:
            raise FieldFormatError(str(path), number, "valor nao numerico")
        if width is None:
            width = len(row)
            if width < 2:
                raise FieldFormatError(str(path), number, "esperado 'x1 ... xn peso'")
        elif len(row) != width:
            raise FieldFormatError(str(path), number, f"{len(row)} colunas, esperadas {width}")
        if row[-1] < 0 or not all(math.isfinite(x) for x in row):
            raise FieldFormatError(str(path), number, "peso negativo ou valor nao finito")
        rows.append(row)
    if not rows:
        return DiscreteMeasure(np.zeros((0, 1)), np.zeros(0))
    data = np.array(rows)
    return DiscreteMeasure(data[:, :-1], data[:, -1])


def write_measure(mu: DiscreteMeasure, path: PathLike) -> str:
    """Grava uma medida discreta com ``%.17g``."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for atom, weight in zip(mu.atoms, mu.weights):
            f.write(" ".join("%.17g" % x for x in atom) + " %.17g\n" % weight)
    return str(path)


def read_cells(path: PathLike, grid: Grid) -> DyadicSet:
    """
    Lê um conjunto de células (linhas ``i1 ... in``) num grid.

    Raises:
        FieldFormatError: Índice fora do grid ou com dimensão errada.
    """
    mask = np.zeros(grid.shape, dtype=bool)
    for number, raw in enumerate(_read_lines(path), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            index = tuple(int(x) for x in text.split())
        except ValueError:
            raise FieldFormatError(str(path), number, "indice nao inteiro")
        if len(index) != grid.n:
            raise FieldFormatError(str(path), number, f"indice com {len(index)} coordenadas, grid tem n={grid.n}")
        if any(i < 0 or i >= grid.N for i in index):
            raise FieldFormatError(str(path), number, f"celula {index} fora do grid")
        mask[index] = True
    return DyadicSet(grid, mask)


def write_cells(K: DyadicSet, path: PathLike) -> str:
    """Grava as células de um DyadicSet, em ordem row-major."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for index in np.argwhere(K.mask):
            f.write(" ".join(str(int(i)) for i in index) + "\n")
    return str(path)


def write_report(data: dict, path: PathLike) -> str:
    """
    Grava um relatório JSON.

    A serialização é determinística (mesma entrada, mesmos bytes); valores
    não finitos saem como as strings "inf", "-inf" e "nan".
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_report(data) + "\n")
    return str(path)


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, np.generic):
        return _finite(value.item())
    return value


def dumps_report(data: dict) -> str:
    """Serializa um relatório em JSON determinístico."""
    return json.dumps(_finite(data), indent=2, ensure_ascii=False)


def read_report(path: PathLike) -> dict:
    """Lê um relatório JSON."""
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
