//! Brute-force dense oracle. Qubit `q` is bit `q` of the basis index, and
//! states are built from positional amplitude functions rather than through
//! the crate's constructors.

#![allow(dead_code)]

use cghz::state::PureState;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

pub const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn c(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn dense(state: &PureState) -> DVector<C> {
    let n = state.num_modes();
    let mut v = DVector::zeros(1 << n);
    for (ket, _, a) in state.terms() {
        let idx = ket.chars().enumerate().filter(|(_, ch)| *ch == 'V').fold(0usize, |acc, (i, _)| acc | 1 << i);
        v[idx] += a;
    }
    v
}

pub fn outer(v: &DVector<C>) -> DMatrix<C> {
    v * v.adjoint()
}

/// `(|H..H⟩ + sign |V..V⟩)/√2` amplitude on `positions` for basis index `idx`.
pub fn ghz_amp(idx: usize, positions: &[usize], sign: f64) -> f64 {
    let ones = positions.iter().filter(|&&p| idx >> p & 1 == 1).count();
    if ones == 0 {
        R
    } else if ones == positions.len() {
        sign * R
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Logic {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Logic Bell amplitude from its GHZ-product definition.
pub fn logic_amp(kind: Logic, idx: usize, a: &[usize], b: &[usize]) -> f64 {
    let (p, m) = (1.0, -1.0);
    let g = |pos: &[usize], s: f64| ghz_amp(idx, pos, s);
    R * match kind {
        Logic::PhiPlus => g(a, p) * g(b, p) + g(a, m) * g(b, m),
        Logic::PhiMinus => g(a, p) * g(b, p) - g(a, m) * g(b, m),
        Logic::PsiPlus => g(a, p) * g(b, m) + g(a, m) * g(b, p),
        Logic::PsiMinus => g(a, p) * g(b, m) - g(a, m) * g(b, p),
    }
}

pub fn logic_vec(kind: Logic, n: usize, a: &[usize], b: &[usize]) -> DVector<C> {
    DVector::from_fn(1 << n, |i, _| c(logic_amp(kind, i, a, b)))
}

/// Single-qubit operator `g` on qubit `q` of `n`.
pub fn single(n: usize, q: usize, g: [[f64; 2]; 2]) -> DMatrix<C> {
    DMatrix::from_fn(1 << n, 1 << n, |r, col| {
        if (r ^ col) & !(1 << q) != 0 {
            c(0.0)
        } else {
            c(g[r >> q & 1][col >> q & 1])
        }
    })
}

pub const H: [[f64; 2]; 2] = [[R, R], [R, -R]];
pub const X: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
pub const Z: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];

/// Hadamard on every qubit.
pub fn hadamard_all(n: usize) -> DMatrix<C> {
    let s = 0.5f64.powf(n as f64 / 2.0);
    DMatrix::from_fn(1 << n, 1 << n, |r, col| c(if (r & col).count_ones() % 2 == 1 { -s } else { s }))
}

pub fn product(ops: impl IntoIterator<Item = DMatrix<C>>, n: usize) -> DMatrix<C> {
    ops.into_iter().fold(DMatrix::identity(1 << n, 1 << n), |acc, op| op * acc)
}

/// Projector onto even (`HH`, `VV`) or odd parity of qubits `x`, `y`.
pub fn parity_projector(n: usize, x: usize, y: usize, even: bool) -> DMatrix<C> {
    DMatrix::from_fn(1 << n, 1 << n, |r, col| {
        let same = (r >> x & 1) == (r >> y & 1);
        c(if r == col && same == even { 1.0 } else { 0.0 })
    })
}

/// `|±⟩⟨±|` on qubit `q`.
pub fn pm_projector(n: usize, q: usize, plus: bool) -> DMatrix<C> {
    let s = if plus { 0.5 } else { -0.5 };
    single(n, q, [[0.5, s], [s, 0.5]])
}

/// Traces out `traced`; remaining qubits keep their relative order.
pub fn partial_trace(rho: &DMatrix<C>, n: usize, traced: &[usize]) -> DMatrix<C> {
    let kept: Vec<usize> = (0..n).filter(|q| !traced.contains(q)).collect();
    let k = kept.len();
    let compress = |idx: usize| kept.iter().enumerate().fold(0, |acc, (j, &q)| acc | (idx >> q & 1) << j);
    let mut out = DMatrix::zeros(1 << k, 1 << k);
    for r in 0..1usize << n {
        for col in 0..1usize << n {
            let agree = traced.iter().all(|&q| (r >> q & 1) == (col >> q & 1));
            if agree {
                out[(compress(r), compress(col))] += rho[(r, col)];
            }
        }
    }
    out
}

pub fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vmax(v: &DVector<C>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
