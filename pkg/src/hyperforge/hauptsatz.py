"""Elements of I^n as sums of scaled Pfister forms, an exhaustive check of the
Hauptsatz bound over them, and a replay of the inductive argument."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import forms
from .core import Report, Structure, StructureError
from .quadext import _stage

MAX_REPRESENTATIONS = 10 ** 6


@dataclass(frozen=True)
class Term:
    sign: int          # +1 or -1
    scalar: int
    gens: tuple

    def form(self, F: Structure) -> tuple:
        f = forms.pfister(F, self.gens, self.scalar)
        return forms.negate(F, f) if self.sign < 0 else f

    def describe(self, F: Structure) -> str:
        s = "+" if self.sign > 0 else "-"
        return f"{s}{F.names[self.scalar]}<<{','.join(F.names[g] for g in self.gens)}>>"


def assemble(F: Structure, rep) -> tuple:
    out = ()
    for t in rep:
        out += t.form(F)
    return out


def describe(F: Structure, rep) -> str:
    return " ".join(t.describe(F) for t in rep)


def _terms(F: Structure, n: int, scaled: bool, dedup: bool) -> list:
    nz = F.nonzero()
    scalars = nz if scaled else [F.one]
    out, seen = [], set()
    for s in scalars:
        for gens in itertools.product(nz, repeat=n):
            t = Term(1, s, tuple(gens))
            if dedup:
                key = tuple(sorted(t.form(F)))
                if key in seen:
                    continue
                seen.add(key)
            out.append(t)
    return out


def gen_In(F: Structure, n: int, terms: int, mode: str = "exhaustive", seed: int = 0,
           samples: int = 1000, scaled: bool = True, dedup: bool = True,
           limit: int = MAX_REPRESENTATIONS):
    """Forms ``sum_j scalar_j * <<gens_j>>`` with exactly ``terms`` summands.

    With ``scaled`` the scalar ranges over the nonzero elements (a sign is then
    redundant, since -phi = (-1)phi); otherwise scalars are 1 and signs +.
    ``dedup`` keeps one term per distinct entry multiset and one
    representation per multiset of terms.  Returns a list of ``(form, rep)``.
    """
    if n < 1 or terms < 1:
        raise StructureError("n and terms must be positive")
    forms.require_special(F)
    if mode == "exhaustive":
        base = _terms(F, n, scaled, dedup)
        count = comb(len(base) + terms - 1, terms) if dedup else len(base) ** terms
        if count > limit:
            raise forms.BudgetExceeded(
                f"{count} representations for n={n}, terms={terms} exceed the limit {limit}")
        it = (itertools.combinations_with_replacement(base, terms) if dedup
              else itertools.product(base, repeat=terms))
        return [(assemble(F, rep), rep) for rep in it]
    if mode == "sampled":
        rng = random.Random(seed)
        nz = F.nonzero()
        out = []
        for _ in range(samples):
            rep = tuple(Term(1, rng.choice(nz) if scaled else F.one,
                             tuple(rng.choice(nz) for _ in range(n)))
                        for _ in range(terms))
            out.append((assemble(F, rep), rep))
        return out
    raise StructureError(f"unknown mode {mode!r}")


def check_hauptsatz(F: Structure, n: int, terms: int, mode: str = "exhaustive", seed: int = 0,
                    samples: int = 1000, scaled: bool = True) -> Report:
    """Every generated form with ``0 < dim_W < 2^n`` is a violation.

    All term counts ``1..terms`` are covered; forms are checked once per
    entry multiset.
    """
    flags = forms.require_special(F)
    if not flags["formally_real"]:
        raise StructureError(f"{F.name} is not formally real")
    bound = 1 << n
    rep_out = Report(info={"base": F.name, "n": n, "terms": terms, "mode": mode})
    seen = {}
    generated = 0
    hyperbolic = 0
    dims = {}
    for t in range(1, terms + 1):
        for form, rep in gen_In(F, n, t, mode=mode, seed=seed + t, samples=samples, scaled=scaled):
            generated += 1
            key = tuple(sorted(form))
            if key in seen:
                continue
            d = forms.witt_decompose(F, key).dim_w
            seen[key] = d
            dims[d] = dims.get(d, 0) + 1
            if d == 0:
                hyperbolic += 1
            elif d < bound:
                rep_out.add("hauptsatz", (describe(F, rep), forms.format_form(F, form), str(d)))
    rep_out.info.update(representations=generated, distinct_forms=len(seen),
                        hyperbolic=hyperbolic,
                        dim_w_histogram={str(k): dims[k] for k in sorted(dims)})
    return rep_out


# ---------------------------------------------------------------- proof replay

@dataclass
class ProofTrace:
    base: str
    n: int
    steps: list = field(default_factory=list)   # dicts: stage, case, dim_w, note
    notes: list = field(default_factory=list)

    @property
    def chain(self) -> list:
        return [s["dim_w"] for s in self.steps]

    @property
    def monotone(self) -> bool:
        c = self.chain
        return all(x >= y for x, y in zip(c, c[1:]))

    @property
    def certified(self) -> bool:
        """The starting dimension is 0 or at least 2^n."""
        d = self.chain[0]
        return d == 0 or d >= 1 << self.n

    def to_dict(self) -> dict:
        return {"base": self.base, "n": self.n, "steps": self.steps, "notes": self.notes,
                "monotone": self.monotone, "certified": self.certified}


def _adjoin(K: Structure, gens):
    """Stage obtained by adjoining square roots of ``gens`` to ``K`` one at a
    time; scalars already equal to [1] are skipped."""
    m = np.arange(K.size)
    cur = K
    skipped = []
    for g in gens:
        s = int(m[g])
        if s == cur.one:
            skipped.append(K.names[g])
            continue
        cur, cmap = _stage(cur, s)
        m = cmap[m]
    return cur, m, skipped


def trace_proof(F: Structure, rep) -> ProofTrace:
    """Replay the induction on the number of Pfister summands.

    Requires positive signs, unit scalars and an anisotropic first summand.
    At each round the current first summand's generators are adjoined, the
    remaining summands are pushed to the new stage and the case is decided:
    I when the image of the whole form is hyperbolic, II when the image of the
    rest is anisotropic, III otherwise (then the next anisotropic summand leads
    the following round).
    """
    rep = tuple(rep)
    if not rep:
        raise StructureError("empty representation")
    if any(t.sign < 0 for t in rep):
        raise StructureError("trace needs positive signs (the argument first makes every sign +1)")
    if any(t.scalar != F.one for t in rep):
        raise StructureError("trace needs unscaled Pfister summands")
    n = len(rep[0].gens)
    K = F
    summands = [t.form(F) for t in rep]
    if forms.is_isotropic(F, summands[0]):
        raise StructureError("first Pfister summand is isotropic")
    trace = ProofTrace(F.name, n)
    whole = tuple(x for s in summands for x in s)
    trace.steps.append({"stage": K.name, "case": "start", "dim_w": forms.dim_w(K, whole), "note": ""})
    if len(summands) == 1:
        trace.steps[0]["case"] = "II"
        trace.steps[0]["note"] = "single summand"
        return trace
    gens = [list(t.gens) for t in rep]
    while True:
        K2, m, skipped = _adjoin(K, gens[0])
        if skipped:
            trace.notes.append(f"{K.name}: {','.join(skipped)} already a square when adjoined")
        pushed = [tuple(int(m[x]) for x in s) for s in summands]
        gens = [[int(m[g]) for g in gl] for gl in gens]
        whole = tuple(x for s in pushed for x in s)
        rest = tuple(x for s in pushed[1:] for x in s)
        d = forms.dim_w(K2, whole)
        step = {"stage": K2.name, "dim_w": d, "note": ""}
        trace.steps.append(step)
        if d == 0:
            step["case"] = "I"
            return trace
        if not forms.is_isotropic(K2, rest):
            step["case"] = "II"
            return trace
        step["case"] = "III"
        live = [i for i in range(1, len(pushed)) if not forms.is_isotropic(K2, pushed[i])]
        if not live:
            step["note"] = "every remaining summand is isotropic"
            return trace
        j = live[0]
        order = [j] + [i for i in range(1, len(pushed)) if i != j]
        summands = [pushed[i] for i in order]
        gens = [gens[i] for i in order]
        K = K2
