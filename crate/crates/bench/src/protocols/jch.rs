//! First-order Trotter circuit for a Jaynes-Cummings-Hubbard chain (open
//! boundary): site `i` is qubit `i` plus mode `i`.

use cvdv_core::gates::ladder;
use cvdv_core::linalg::{c, kron, CMatrix, ONE};
use cvdv_core::{fock_state, Circuit, GateKind, PureState, Result, SystemLayout, Wire};

#[derive(Clone, Debug, PartialEq)]
pub struct JchParams {
    pub sites: usize,
    pub omega_c: f64,
    pub omega_tls: f64,
    pub hop: f64,
    pub coupling: f64,
    pub dt: f64,
    pub steps: usize,
    pub cutoff: usize,
}

pub fn layout(p: &JchParams) -> Result<SystemLayout> {
    SystemLayout::new(p.sites, vec![p.cutoff; p.sites])
}

/// `photons` in mode 0, everything else in the ground state.
pub fn initial_state(p: &JchParams, photons: usize) -> Result<PureState> {
    fock_state(&layout(p)?, 0, photons)
}

pub fn push_step(circ: &mut Circuit, p: &JchParams) -> Result<()> {
    for i in 0..p.sites {
        circ.push(GateKind::Rz(-p.omega_tls * p.dt), &[Wire::Qubit(i)])?;
    }
    for i in 0..p.sites {
        circ.push(GateKind::Rotation(-p.omega_c * p.dt), &[Wire::Mode(i)])?;
    }
    for i in 0..p.sites {
        circ.push(GateKind::JaynesCummings(p.coupling * p.dt), &[Wire::Qubit(i), Wire::Mode(i)])?;
    }
    for i in 0..p.sites - 1 {
        circ.push(GateKind::Hopping(p.hop * p.dt), &[Wire::Mode(i), Wire::Mode(i + 1)])?;
    }
    Ok(())
}

pub fn build_jch(p: &JchParams) -> Result<Circuit> {
    let mut circ = Circuit::new("jch", layout(p)?)
        .param("sites", p.sites as f64)
        .param("dt", p.dt)
        .param("steps", p.steps as f64)
        .param("cutoff", p.cutoff as f64);
    for _ in 0..p.steps {
        push_step(&mut circ, p)?;
    }
    Ok(circ)
}

/// The full Hamiltonian as a dense matrix on the canonical register, for
/// comparison against the Trotter circuit.
pub fn dense_hamiltonian(p: &JchParams) -> Result<CMatrix> {
    let lay = layout(p)?;
    let mut sp = CMatrix::zeros(2, 2);
    sp[(1, 0)] = ONE;
    let excited = sp.clone() * sp.adjoint();
    let a = ladder(p.cutoff);
    let n = a.adjoint() * &a;
    let embed = |m: &CMatrix, t: &[usize]| cvdv_core::oracle::dense_embed(m, &lay, t);
    let q = |i: usize| i;
    let m = |i: usize| p.sites + i;
    let mut h = CMatrix::zeros(lay.dim(), lay.dim());
    for i in 0..p.sites {
        h += embed(&n, &[m(i)])? * c(p.omega_c, 0.0);
        h += embed(&excited, &[q(i)])? * c(p.omega_tls, 0.0);
        let jc = kron(&sp, &a) + kron(&sp.adjoint(), &a.adjoint());
        h += embed(&jc, &[q(i), m(i)])? * c(p.coupling, 0.0);
    }
    for i in 0..p.sites - 1 {
        let hop = kron(&a.adjoint(), &a) + kron(&a, &a.adjoint());
        h += embed(&hop, &[m(i), m(i + 1)])? * c(p.hop, 0.0);
    }
    Ok(h)
}
