//! Deterministic cat-state preparation and the repeated-cat GKP protocol.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use cvdv_core::engine::{hermite_functions, linspace, trapezoid};
use cvdv_core::gates::coherent_amplitudes;
use cvdv_core::linalg::{c, C64, ZERO};
use cvdv_core::{Circuit, GateKind, Result, SystemLayout, Wire};

/// One round of the protocol on `(qubit, mode)`: a conditional position
/// kick of `±shift` (`exp(-i √2 shift p ⊗ σx)` via H-conjugated CD), then
/// the disentangling `exp(i (π/4shift) x ⊗ σy)` via S·H-conjugated CD.
pub fn push_cat_round(c_: &mut Circuit, qubit: usize, mode: usize, shift: f64) -> Result<()> {
    let q = Wire::Qubit(qubit);
    let qm = [q, Wire::Mode(mode)];
    let kick = shift * FRAC_1_SQRT_2;
    let untangle = PI / (4.0 * shift) * FRAC_1_SQRT_2;
    c_.push(GateKind::H, &[q])?;
    c_.push(GateKind::ConditionalDisplacement(c(kick, 0.0)), &qm)?;
    c_.push(GateKind::H, &[q])?;
    c_.push(GateKind::Sdg, &[q])?;
    c_.push(GateKind::H, &[q])?;
    c_.push(GateKind::ConditionalDisplacement(c(0.0, untangle)), &qm)?;
    c_.push(GateKind::H, &[q])?;
    c_.push(GateKind::S, &[q])?;
    Ok(())
}

/// Cat circuit: `exp(-i 2α p ⊗ σx)` moves the branches to `x = ±2α`, i.e.
/// coherent amplitude `±√2 α`.
pub fn build_cat(alpha: f64, cutoff: usize) -> Result<Circuit> {
    let layout = SystemLayout::new(1, vec![cutoff])?;
    let mut circ = Circuit::new("cat", layout).param("alpha", alpha).param("cutoff", cutoff as f64);
    push_cat_round(&mut circ, 0, 0, 2.0 * alpha)?;
    Ok(circ)
}

/// Coherent amplitude of the lobes produced by [`build_cat`].
pub fn cat_lobe_amplitude(alpha: f64) -> f64 {
    std::f64::consts::SQRT_2 * alpha
}

/// Normalized even cat `|β> + |-β>` from closed-form coherent amplitudes.
pub fn even_cat(beta: f64, cutoff: usize) -> Vec<C64> {
    let plus = coherent_amplitudes(c(beta, 0.0), cutoff);
    let minus = coherent_amplitudes(c(-beta, 0.0), cutoff);
    let v: Vec<C64> = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
    normalized(v)
}

/// Squeezed vacuum then `rounds` cat rounds with branch shift `√π`.
/// `stages` counts the squeezer as the first stage, so `rounds = stages - 1`.
pub fn build_gkp(stages: usize, squeeze: f64, cutoff: usize) -> Result<Circuit> {
    let layout = SystemLayout::new(1, vec![cutoff])?;
    let mut circ = Circuit::new("gkp", layout)
        .param("stages", stages as f64)
        .param("squeeze", squeeze)
        .param("cutoff", cutoff as f64);
    push_gkp(&mut circ, 0, 0, stages, squeeze)?;
    Ok(circ)
}

pub fn push_gkp(circ: &mut Circuit, qubit: usize, mode: usize, stages: usize, squeeze: f64) -> Result<()> {
    circ.push(GateKind::Squeeze(c(squeeze, 0.0)), &[Wire::Mode(mode)])?;
    for _ in 1..stages.max(1) {
        push_cat_round(circ, qubit, mode, PI.sqrt())?;
    }
    Ok(())
}

/// Finite-energy GKP `|mu>_L`: squeezed peaks (squeeze `r`) at
/// `x = (2m + mu)√π`, weighted by `exp(-(envelope x)²/2)`, projected on the
/// first `cutoff` Fock states by quadrature against Hermite functions.
pub fn gkp_target(mu: u8, r: f64, envelope: f64, cutoff: usize) -> Vec<C64> {
    let sp = PI.sqrt();
    let width = (-r).exp() * FRAC_1_SQRT_2;
    let reach = (2.0 * cutoff as f64).sqrt() + 8.0;
    let xs = linspace(-reach, reach, 8001);
    let peaks: Vec<f64> = (-40..=40).map(|m| (2 * m + mu as i32) as f64 * sp).filter(|x| x.abs() < reach + 6.0).collect();
    let psi: Vec<f64> = xs
        .iter()
        .map(|&x| {
            peaks
                .iter()
                .map(|&xm| (-(envelope * xm).powi(2) / 2.0).exp() * (-((x - xm) / width).powi(2) / 4.0).exp())
                .sum()
        })
        .collect();
    let basis: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_functions(x, cutoff)).collect();
    let v: Vec<C64> = (0..cutoff)
        .map(|n| {
            let f: Vec<f64> = basis.iter().zip(&psi).map(|(h, p)| h[n] * p).collect();
            c(trapezoid(&xs, &f), 0.0)
        })
        .collect();
    normalized(v)
}

fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    } else {
        v.iter_mut().for_each(|z| *z = ZERO);
    }
    v
}
