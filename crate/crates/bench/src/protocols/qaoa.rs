//! Continuous-variable QAOA on one qumode: a squeezed start, then alternating
//! cost `exp(-iη C(x))` and kinetic mixer `exp(-iγ p²/2)` layers.

use cvdv_core::gates::{momentum, position, MatrixData, WireKind};
use cvdv_core::linalg::{c, expm_hermitian, identity, CMatrix};
use cvdv_core::{Circuit, Error, GateKind, Result, SystemLayout, Wire};

/// Cost polynomial `Σ coeffs[k] x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostPoly {
    pub coeffs: Vec<f64>,
}

impl CostPoly {
    /// `(x - c)²`
    pub fn shifted_square(center: f64) -> Self {
        CostPoly { coeffs: vec![center * center, -2.0 * center, 1.0] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&v| v != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }

    /// `C(x)` on the truncated space, built from powers of the truncated `x`.
    pub fn operator(&self, cutoff: usize) -> CMatrix {
        let x = position(cutoff);
        let mut pow = identity(cutoff);
        let mut out = CMatrix::zeros(cutoff, cutoff);
        for &k in &self.coeffs {
            out += &pow * c(k, 0.0);
            pow = &pow * &x;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QaoaParams {
    pub cost: CostPoly,
    pub cutoff: usize,
    /// Initial squeeze; negative values squeeze `p` and spread `x`.
    pub squeeze: f64,
    /// Costs above degree two have no Gaussian decomposition; they are only
    /// built when this is set.
    pub allow_high_degree: bool,
}

fn mode_gate(name: &str, h: &CMatrix, t: f64, strength: f64) -> GateKind {
    GateKind::Custom {
        name: name.to_string(),
        wires: vec![WireKind::Mode],
        matrix: MatrixData::from_matrix(&expm_hermitian(h, t)),
        strength,
    }
}

/// `angles` holds `(η_j, γ_j)` pairs, one per layer.
pub fn build_qaoa(p: &QaoaParams, angles: &[f64]) -> Result<Circuit> {
    if p.cost.degree() > 2 && !p.allow_high_degree {
        return Err(Error::InvalidParameter {
            module: "benchmarks",
            msg: format!("cost degree {} needs allow_high_degree", p.cost.degree()),
        });
    }
    let depth = angles.len() / 2;
    let layout = SystemLayout::new(0, vec![p.cutoff])?;
    let mut circ = Circuit::new("qaoa", layout)
        .param("depth", depth as f64)
        .param("cutoff", p.cutoff as f64)
        .param("squeeze", p.squeeze);
    let m = [Wire::Mode(0)];
    circ.push(GateKind::Squeeze(c(p.squeeze, 0.0)), &m)?;
    let hc = p.cost.operator(p.cutoff);
    let pm = momentum(p.cutoff);
    let hm = &pm * &pm * c(0.5, 0.0);
    for l in angles.chunks_exact(2) {
        circ.push(mode_gate("cost", &hc, l[0], l[0]), &m)?;
        circ.push(mode_gate("mixer", &hm, l[1], l[1]), &m)?;
    }
    Ok(circ)
}
