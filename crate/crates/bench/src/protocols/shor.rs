//! Period finding with one qubit and three qumodes.
//!
//! Mode 0 holds a position comb with spacing `L = 2√π` (the GKP protocol's
//! output). Mode 1 holds the work register in the Fock basis, loaded to `|1>`
//! through the qubit. The modular exponentiation is `exp(i x ⊗ G / L)`, with
//! `G` the principal logarithm of the multiply-by-`a` permutation, so the
//! comb tooth at `x = kL` applies `a^k mod N`. It is split into `slices`
//! equal gates. Mode 2 is prepared in squeezed vacuum and left idle. A
//! quarter rotation then a position read of mode 0 samples the momentum,
//! whose scaled fractional part approximates `s/r`.

use std::f64::consts::PI;

use cvdv_core::engine::{linspace, measure_quadrature, quadrature_distribution, trapezoid, Quadrature};
use cvdv_core::gates::{position, MatrixData, WireKind};
use cvdv_core::hilbert::product_state;
use cvdv_core::linalg::{c, eigh, CMatrix, C64, ONE, ZERO};
use cvdv_core::{vacuum_state, Circuit, Error, GateKind, PureState, Result, SystemLayout, Wire};

use super::cat::{gkp_target, push_gkp};

pub fn comb_spacing() -> f64 {
    2.0 * PI.sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShorParams {
    pub a: u64,
    pub n: u64,
    pub slices: usize,
    pub squeeze: f64,
    pub stages: usize,
    /// Cutoffs of the comb, work and idle modes.
    pub cutoffs: [usize; 3],
    /// Start mode 0 in a target comb with this envelope instead of running
    /// the GKP protocol.
    pub ideal_comb: Option<f64>,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1u64 % m, base % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if gcd(a, n) != 1 {
        return None;
    }
    (1..=n).find(|&r| pow_mod(a, r, n) == 1)
}

/// Convergent denominators of `f`, smallest first, up to `max_den`.
pub fn convergent_denominators(f: f64, max_den: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut x = f;
    for _ in 0..64 {
        let q = x.floor();
        if q > u32::MAX as f64 {
            break;
        }
        let q = q as u64;
        (k0, k1) = (k1, q * k1 + k0);
        if k1 > max_den {
            break;
        }
        if k1 > 0 && !out.contains(&k1) {
            out.push(k1);
        }
        let frac = x - x.floor();
        if frac < 1e-9 {
            break;
        }
        x = 1.0 / frac;
    }
    out
}

/// Nontrivial factors from a period, if `r` is even and `a^{r/2} ≠ -1`.
pub fn factors_from_period(a: u64, n: u64, r: u64) -> Option<(u64, u64)> {
    if r == 0 || r % 2 == 1 || pow_mod(a, r, n) != 1 {
        return None;
    }
    let h = pow_mod(a, r / 2, n);
    if h == n - 1 {
        return None;
    }
    for g in [gcd(h + n - 1, n), gcd(h + 1, n)] {
        if g > 1 && g < n {
            return Some((g.min(n / g), g.max(n / g)));
        }
    }
    None
}

/// Period candidates from a measured phase fraction: convergent
/// denominators `d ≥ 2` and `2d` (for `s` sharing a factor 2 with `r`),
/// keeping those with `a^r ≡ 1`.
pub fn period_candidates(a: u64, n: u64, frac: f64) -> Vec<u64> {
    let mut out = Vec::new();
    for d in convergent_denominators(frac, n).into_iter().filter(|&d| d >= 2) {
        for k in 1..=2 {
            let r = d * k;
            if r <= n && pow_mod(a, r, n) == 1 && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// Principal logarithm `G` with `exp(iG) = M_a` on `dim` Fock levels, where
/// `M_a |y> = |a y mod N>` for `y < N` and levels `y ≥ N` are fixed.
pub fn modmul_generator(a: u64, n: u64, dim: usize) -> Result<CMatrix> {
    if (dim as u64) < n {
        return Err(Error::InvalidParameter { module: "benchmarks", msg: format!("work cutoff {dim} below N = {n}") });
    }
    let mut g = CMatrix::zeros(dim, dim);
    let mut seen = vec![false; dim];
    for start in 0..n as usize {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut y = (a * start as u64 % n) as usize;
        while y != start {
            seen[y] = true;
            cycle.push(y);
            y = (a * y as u64 % n) as usize;
        }
        let l = cycle.len() as i64;
        // |u_s> = Σ_k e^{-2πi sk/l} |a^k y0> / √l has eigenvalue e^{2πi s/l}.
        for s in (-(l - 1) / 2)..=(l / 2) {
            let theta = 2.0 * PI * s as f64 / l as f64;
            let u: Vec<C64> = (0..l)
                .map(|k| C64::from_polar((l as f64).sqrt().recip(), -2.0 * PI * (s * k) as f64 / l as f64))
                .collect();
            for (i, &yi) in cycle.iter().enumerate() {
                for (j, &yj) in cycle.iter().enumerate() {
                    g[(yi, yj)] += u[i] * u[j].conj() * theta;
                }
            }
        }
    }
    Ok(g)
}

/// `exp(i t x ⊗ G)` on (comb mode, work mode), assembled in the `x`
/// eigenbasis of the truncated comb mode.
pub fn controlled_power(g: &CMatrix, t: f64, comb_cutoff: usize) -> CMatrix {
    let (xs, xv) = eigh(&position(comb_cutoff));
    let (gs, gv) = eigh(g);
    let d = g.nrows();
    let nc = comb_cutoff;
    let mut u = CMatrix::zeros(nc * d, nc * d);
    let mut block = CMatrix::zeros(d, d);
    for (k, &xk) in xs.iter().enumerate() {
        let phases: Vec<C64> = gs.iter().map(|&l| C64::from_polar(1.0, t * xk * l)).collect();
        block.fill(ZERO);
        for a in 0..d {
            for b in 0..d {
                block[(a, b)] = (0..d).map(|s| gv[(a, s)] * phases[s] * gv[(b, s)].conj()).sum();
            }
        }
        let e = xv.column(k);
        for i in 0..nc {
            for j in 0..nc {
                let w = e[i] * e[j].conj();
                if w.norm_sqr() < 1e-30 {
                    continue;
                }
                for a in 0..d {
                    for b in 0..d {
                        u[(i * d + a, j * d + b)] += w * block[(a, b)];
                    }
                }
            }
        }
    }
    u
}

pub fn build_shor(p: &ShorParams) -> Result<Circuit> {
    if gcd(p.a, p.n) != 1 {
        return Err(Error::InvalidParameter { module: "benchmarks", msg: format!("gcd({}, {}) != 1", p.a, p.n) });
    }
    let layout = SystemLayout::new(1, p.cutoffs.to_vec())?;
    let mut circ = Circuit::new("shor", layout)
        .param("a", p.a as f64)
        .param("N", p.n as f64)
        .param("slices", p.slices as f64)
        .param("squeeze", p.squeeze)
        .param("stages", p.stages as f64);
    let q = Wire::Qubit(0);
    // Work register to |1>.
    circ.push(GateKind::X, &[q])?;
    circ.push(GateKind::JaynesCummings(PI / 2.0), &[q, Wire::Mode(1)])?;
    if p.ideal_comb.is_none() {
        push_gkp(&mut circ, 0, 0, p.stages, p.squeeze)?;
    }
    circ.push(GateKind::Squeeze(c(p.squeeze, 0.0)), &[Wire::Mode(2)])?;
    let g = modmul_generator(p.a, p.n, p.cutoffs[1])?;
    let slices = p.slices.max(1);
    let t = 1.0 / (comb_spacing() * slices as f64);
    let u = controlled_power(&g, t, p.cutoffs[0]);
    let gate = GateKind::Custom {
        name: format!("U_a{}", p.a),
        wires: vec![WireKind::Mode, WireKind::Mode],
        matrix: MatrixData::from_matrix(&u),
        strength: t * PI,
    };
    for _ in 0..slices {
        circ.push(gate.clone(), &[Wire::Mode(0), Wire::Mode(1)])?;
    }
    circ.push(GateKind::Fourier, &[Wire::Mode(0)])?;
    Ok(circ)
}

pub fn initial_state(p: &ShorParams) -> Result<PureState> {
    let layout = SystemLayout::new(1, p.cutoffs.to_vec())?;
    match p.ideal_comb {
        None => vacuum_state(&layout),
        Some(env) => {
            let fock0 = |n: usize| (0..n).map(|k| if k == 0 { ONE } else { ZERO }).collect::<Vec<_>>();
            product_state(
                &layout,
                &[fock0(2), gkp_target(0, p.squeeze, env, p.cutoffs[0]), fock0(p.cutoffs[1]), fock0(p.cutoffs[2])],
            )
        }
    }
}

/// Fraction of uniformly random phases that would still yield a factor;
/// the floor any quantum advantage has to beat.
pub fn chance_success(a: u64, n: u64) -> f64 {
    let bins = 20_000;
    let hits = (0..bins)
        .filter(|&i| {
            let f = (i as f64 + 0.5) / bins as f64;
            period_candidates(a, n, f).iter().any(|&r| factors_from_period(a, n, r).is_some())
        })
        .count();
    hits as f64 / bins as f64
}

/// Exact probability that `frac(x L / 2π)` lands within `1/(4r)` of some
/// `s/r`; 0.5 means the read-out carries no period information.
pub fn peak_mass(state: &PureState, r: u64) -> Result<f64> {
    let n = state.layout.cutoffs[0];
    let reach = (2.0 * n as f64).sqrt() + 4.0;
    let grid = linspace(-reach, reach, 8001);
    let p = quadrature_distribution(&state.mode_reduced(0)?, Quadrature::X, &grid)?;
    let total = trapezoid(&grid, &p);
    let inside: Vec<f64> = grid
        .iter()
        .zip(&p)
        .map(|(&x, &pv)| {
            let f = (x * comb_spacing() / (2.0 * PI)) * r as f64;
            let d = (f - f.round()).abs();
            if d < 0.25 {
                pv
            } else {
                0.0
            }
        })
        .collect();
    Ok(trapezoid(&grid, &inside) / total)
}

/// Scaled fractional part `frac(x L / 2π)` of each position sample.
pub fn sample_fractions(state: &PureState, shots: usize, seed: u64) -> Result<Vec<f64>> {
    let n = state.layout.cutoffs[0];
    let reach = (2.0 * n as f64).sqrt() + 4.0;
    let grid = linspace(-reach, reach, 4001);
    let xs = measure_quadrature(state, 0, Quadrature::X, &grid, shots, seed)?;
    Ok(xs.iter().map(|x| (x * comb_spacing() / (2.0 * PI)).rem_euclid(1.0)).collect())
}
