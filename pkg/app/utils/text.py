from typing import Any, Dict, Iterable

from ..models.relation import ClassificationResult
from ..models.weingarten import BasicClass, NaturalPdeDescriptor, OP_LAPLACE, OP_LAPLACE_STAR


def render_pde(desc: NaturalPdeDescriptor) -> str:
    """Natural PDE spelled out, e.g. 'λ_uu − λ_vv = sinh λ'"""
    sign = "+" if desc.operator in (OP_LAPLACE, OP_LAPLACE_STAR) else "−"
    if desc.starred:
        return f"({desc.dependent})_uu {sign} ({desc.reciprocal})_vv = {desc.rhs_text}"
    return f"{desc.dependent}_uu {sign} {desc.dependent}_vv = {desc.rhs_text}"


def compact_pde(desc: NaturalPdeDescriptor) -> str:
    """Operator form, e.g. 'Δλ=−sin λ'"""
    return f"{desc.operator}{desc.dependent}={desc.rhs_text}"


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_catalog(classes: Iterable[BasicClass]) -> str:
    lines = []
    for basic in classes:
        lines.append(f"({basic.index}) {basic.id}: {basic.relation}")
        lines.append(f"    {basic.convention}; {basic.substitution.name}")
        lines.append(f"    {basic.pde.operator} [{basic.pde.character}]  {render_pde(basic.pde)}")
    return "\n".join(lines)


def render_classification(result: ClassificationResult) -> str:
    basic = result.basic
    rel = result.input
    lines = [
        f"class ({basic.index}), {basic.relation.replace(' ', '')}, {compact_pde(basic.pde)}",
        f"input: {rel.delta:g} K = {rel.alpha:g} H + {rel.beta:g} H' + {rel.gamma:g}",
        f"case trace: {' -> '.join(result.case_trace)}",
        f"offset a: {result.offset_a:.12g}  eps: {result.eps:+d}  similarity scale: {result.similarity_scale:.12g}",
        f"PDE: {render_pde(basic.pde)}",
    ]
    lines.extend(f"note: {note}" for note in result.notes)
    return "\n".join(lines)


def render_report(title: str, values: Dict[str, Any]) -> str:
    lines = [title]
    width = max((len(k) for k in values), default=0)
    for key, value in values.items():
        lines.append(f"  {key.ljust(width)}  {format_value(value)}")
    return "\n".join(lines)
