"""
Solver primal-dual (Chambolle-Pock) para problemas de capacidade.

Resolve

    min  sum_i ||K_i u||_1   sujeito a  u em C,
    C = {u >= 1 em K, u = 0 na moldura, |u| <= B},

onde cada K_i é um operador linear real dado por (apply, adjoint). Os pesos
das quadraturas ficam dentro dos operadores.

O dual de ||.||_1 é a bola |p| <= 1, logo prox do conjugado é um clip. Para
qualquer p viável, sum <K_i u, p_i> <= objetivo(u), o que dá o limitante
inferior min_{u em C} <u, K^T p>, calculado em forma fechada pela caixa C.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from scipy import fft as spfft

from core.config import Config
from core.models import SolveReport


@dataclass
class LinearTerm:
    """Um termo ||K u||_1 do objetivo."""

    name: str
    apply: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]


def multiplier_term(name: str, symbol: np.ndarray, scale: float = 1.0) -> LinearTerm:
    """
    Multiplicador de Fourier real (símbolo com simetria hermitiana).

    O adjunto no produto euclidiano tem símbolo conj(m).
    """
    forward = symbol * scale
    backward = np.conj(forward)

    def apply(u):
        return spfft.ifftn(spfft.fftn(u) * forward).real

    def adjoint(p):
        return spfft.ifftn(spfft.fftn(p) * backward).real

    return LinearTerm(name, apply, adjoint)


def shift_difference_term(offset, weight: float) -> LinearTerm:
    """w (u(x + k) - u(x)) com deslocamento periódico."""
    axes = tuple(range(len(offset)))
    forward = tuple(-int(c) for c in offset)
    backward = tuple(int(c) for c in offset)

    def apply(u):
        return weight * (np.roll(u, forward, axis=axes) - u)

    def adjoint(p):
        return weight * (np.roll(p, backward, axis=axes) - p)

    return LinearTerm(f"shift{tuple(offset)}", apply, adjoint)


def pair_difference_term(offset, weight: float, shape, block: int = 1) -> LinearTerm:
    """
    w (U(X + K) - U(X)) com U o campo estendido por zero a um toro de lado
    2N por eixo e reduzido a médias em blocos de lado ``block``.

    No toro dobrado um deslocamento de até N nós não volta sobre o box, logo
    os pares são os de R^n.
    """
    n = len(shape)
    padding = [(0, m) for m in shape]
    coarse = tuple(2 * m // block for m in shape)
    split = tuple(d for m in coarse for d in (m, block))
    crop = tuple(slice(0, m) for m in shape)
    shift = shift_difference_term(offset, weight)

    def restrict(u):
        padded = np.pad(u, padding)
        if block == 1:
            return padded
        return padded.reshape(split).mean(axis=tuple(range(1, 2 * n, 2)))

    def prolong(v):
        for axis in range(n):
            v = np.repeat(v, block, axis=axis)
        return v[crop] / block ** n

    return LinearTerm(f"pair{block}{tuple(offset)}",
                      lambda u: shift.apply(restrict(u)),
                      lambda p: prolong(shift.adjoint(p)))


def diagonal_term(name: str, weight: float) -> LinearTerm:
    """w u, auto-adjunto."""
    return LinearTerm(name, lambda u: weight * u, lambda p: weight * p)


def estimate_operator_norm(terms: List[LinearTerm], shape, iters: int) -> float:
    """
    ||K|| pela iteração de potência em K^T K.

    O vetor inicial é fixo (sin(1 + i)), o que torna a estimativa
    determinística.
    """
    u = np.sin(1.0 + np.arange(int(np.prod(shape)), dtype=np.float64)).reshape(shape)
    u /= np.linalg.norm(u)
    value = 0.0
    for _ in range(max(1, iters)):
        w = sum(t.adjoint(t.apply(u)) for t in terms)
        value = float(np.linalg.norm(w))
        if value == 0.0:
            return 0.0
        u = w / value
    return math.sqrt(value)


def objective(terms: List[LinearTerm], u: np.ndarray) -> float:
    """sum_i ||K_i u||_1."""
    return float(sum(np.abs(t.apply(u)).sum() for t in terms))


class PrimalDualSolver:
    """
    Chambolle-Pock com reinícios adaptativos e peso primal.

    Passos tau = eta / omega e sigma = eta omega, com eta = step_safety / ||K||,
    logo tau sigma ||K||^2 < 1 para qualquer omega. A cada checagem o iterado
    atual e a média desde o último reinício são avaliados; o de menor gap é o
    candidato. Reinicia-se no candidato quando o gap cai abaixo de
    restart_sufficient vezes o gap do reinício anterior, quando cai abaixo de
    restart_necessary vezes e parou de melhorar, ou quando o ciclo passou de
    restart_artificial vezes o total de iterações. No reinício omega é
    suavizado em direção a ||Delta p|| / ||Delta u||.

    Args:
        terms: Termos do objetivo.
        constrained: Máscara dos nós com u >= 1.
        frame: Máscara dos nós com u = 0.
        bound: Cota B da caixa |u| <= B.
        config: Knobs do solver (tol_gap, max_iter, check_every,
            power_iters, step_safety e os de reinício).
    """

    def __init__(self, terms: List[LinearTerm], constrained: np.ndarray, frame: np.ndarray,
                 bound: float, config: Config, max_iter: Optional[int] = None,
                 tol_gap: Optional[float] = None):
        self.terms = terms
        self.constrained = constrained
        self.frame = frame & ~constrained
        self.free = ~(self.constrained | self.frame)
        self.bound = float(bound)
        self.config = config
        self.max_iter = config.max_iter if max_iter is None else int(max_iter)
        self.tol_gap = config.tol_gap if tol_gap is None else float(tol_gap)

    def project(self, u: np.ndarray) -> np.ndarray:
        """Projeção euclidiana em C."""
        B = self.bound
        u = np.clip(u, -B, B)
        u[self.constrained] = np.clip(u[self.constrained], 1.0, B)
        u[self.frame] = 0.0
        return u

    def dual_bound(self, duals: List[np.ndarray]) -> float:
        """min_{u em C} <u, K^T p> para p com |p| <= 1."""
        v = sum(t.adjoint(p) for t, p in zip(self.terms, duals))
        on_set = v[self.constrained]
        value = float(np.where(on_set >= 0.0, on_set, self.bound * on_set).sum())
        return value - self.bound * float(np.abs(v[self.free]).sum())

    def _should_restart(self, gap: float, restart_gap: float, previous_gap: float,
                        since_restart: int, iters: int) -> bool:
        cfg = self.config
        if gap <= cfg.restart_sufficient * restart_gap:
            return True
        if gap <= cfg.restart_necessary * restart_gap and gap > previous_gap:
            return True
        return since_restart >= cfg.restart_artificial * iters

    def _primal_weight(self, omega: float, delta_u: float, delta_p: float) -> float:
        if delta_u <= 1e-10 or delta_p <= 1e-10:
            return omega
        theta = self.config.weight_smoothing
        return math.exp(theta * math.log(delta_p / delta_u) + (1.0 - theta) * math.log(omega))

    def solve(self, initial: np.ndarray) -> SolveReport:
        """
        Executa as iterações até gap <= tol_gap * primal ou max_iter.

        Returns:
            SolveReport: melhor valor primal viável, melhor limitante dual e
                o traço (iter, primal, dual) das checagens.
        """
        cfg = self.config
        u = self.project(np.array(initial, dtype=np.float64))
        norm = estimate_operator_norm(self.terms, u.shape, cfg.power_iters)
        eta = cfg.step_safety / norm if norm > 0 else 1.0
        omega = 1.0

        best_u = u.copy()
        best_primal = objective(self.terms, u)
        best_dual = -math.inf
        duals = [np.zeros_like(t.apply(u)) for t in self.terms]
        u_bar = u.copy()
        avg_u = np.zeros_like(u)
        avg_p = [np.zeros_like(p) for p in duals]
        anchor_u, anchor_p = u.copy(), [p.copy() for p in duals]
        restart_gap, previous_gap = math.inf, math.inf
        count = since_restart = restarts = 0
        trace = []
        iters = 0
        converged = False

        while iters < self.max_iter:
            iters += 1
            tau, sigma = eta / omega, eta * omega
            duals = [np.clip(p + sigma * t.apply(u_bar), -1.0, 1.0) for t, p in zip(self.terms, duals)]
            descent = sum(t.adjoint(p) for t, p in zip(self.terms, duals))
            u_next = self.project(u - tau * descent)
            u_bar = 2.0 * u_next - u
            u = u_next

            count += 1
            since_restart += 1
            avg_u += (u - avg_u) / count
            for a, p in zip(avg_p, duals):
                a += (p - a) / count

            if iters % cfg.check_every == 0 or iters == self.max_iter:
                candidates = []
                for cand_u, cand_p in ((u, duals), (avg_u, avg_p)):
                    primal = objective(self.terms, cand_u)
                    dual = self.dual_bound(cand_p)
                    if primal < best_primal:
                        best_primal = primal
                        best_u = cand_u.copy()
                    best_dual = max(best_dual, dual)
                    candidates.append((primal - dual, cand_u, cand_p))
                trace.append((iters, best_primal, best_dual))
                if best_primal - best_dual <= self.tol_gap * best_primal:
                    converged = True
                    break

                gap, cand_u, cand_p = min(candidates, key=lambda c: c[0])
                if self._should_restart(gap, restart_gap, previous_gap, since_restart, iters):
                    delta_u = float(np.linalg.norm(cand_u - anchor_u))
                    delta_p = math.sqrt(sum(float(np.linalg.norm(p - a)) ** 2
                                            for p, a in zip(cand_p, anchor_p)))
                    omega = self._primal_weight(omega, delta_u, delta_p)
                    u = cand_u.copy()
                    duals = [p.copy() for p in cand_p]
                    u_bar = u.copy()
                    anchor_u, anchor_p = u.copy(), [p.copy() for p in duals]
                    avg_u = np.zeros_like(u)
                    avg_p = [np.zeros_like(p) for p in duals]
                    restart_gap, previous_gap = gap, math.inf
                    count = since_restart = 0
                    restarts += 1
                else:
                    previous_gap = gap

        gap = best_primal - best_dual if math.isfinite(best_dual) else math.inf
        return SolveReport(
            value=best_primal,
            gap=gap,
            iters=iters,
            dual_value=best_dual if math.isfinite(best_dual) else 0.0,
            converged=converged,
            minimizer=best_u,
            trace=trace,
            details={"operator_norm": norm, "step": eta, "bound": self.bound,
                     "restarts": restarts, "primal_weight": omega},
        )
