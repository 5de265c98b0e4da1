//! Dense reference backend: full-space operators from explicit Kronecker
//! products and wire permutations, used to cross-check the strided engine.

use crate::engine::{op_matrix, Circuit};
use crate::error::{invalid, Result};
use crate::hilbert::{PureState, SystemLayout};
use crate::linalg::{expm_hermitian, identity, kron, CMatrix, CVector, ONE};

/// Largest full dimension the dense backend accepts.
pub const DENSE_CAP: usize = 1 << 12;

/// Permutation `P` with `P |original> = |reordered>`, where the reordered
/// Kronecker factors are `order[0] ⊗ order[1] ⊗ ...`.
fn reorder_matrix(dims: &[usize], order: &[usize]) -> CMatrix {
    let d: usize = dims.iter().product();
    let mut p = CMatrix::zeros(d, d);
    for idx in 0..d {
        // Little-endian digits of the original index.
        let mut rem = idx;
        let digits: Vec<usize> = dims
            .iter()
            .map(|&n| {
                let v = rem % n;
                rem /= n;
                v
            })
            .collect();
        let mut r = 0;
        for &w in order {
            r = r * dims[w] + digits[w];
        }
        p[(r, idx)] = ONE;
    }
    p
}

/// `local ⊗ I` on the full space, moved into place by wire permutation.
pub fn dense_embed(local: &CMatrix, layout: &SystemLayout, targets: &[usize]) -> Result<CMatrix> {
    let dims = layout.dims();
    let d = layout.dim();
    if d > DENSE_CAP {
        return Err(invalid("oracle", format!("dimension {d} above dense cap {DENSE_CAP}")));
    }
    let rest: Vec<usize> = (0..dims.len()).rev().filter(|w| !targets.contains(w)).collect();
    let rest_dim: usize = rest.iter().map(|&w| dims[w]).product();
    let mut order = targets.to_vec();
    order.extend(&rest);
    let p = reorder_matrix(&dims, &order);
    Ok(p.transpose() * kron(local, &identity(rest_dim)) * p)
}

pub fn dense_circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let mut u = identity(circuit.layout.dim());
    for op in &circuit.ops {
        let (m, flat) = op_matrix(&circuit.layout, op)?;
        u = dense_embed(&m, &circuit.layout, &flat)? * u;
    }
    Ok(u)
}

/// Apply a circuit by one dense matrix-vector product per gate.
pub fn dense_run(circuit: &Circuit, initial: &PureState) -> Result<PureState> {
    let mut v = CVector::from_column_slice(&initial.amps);
    for op in &circuit.ops {
        let (m, flat) = op_matrix(&circuit.layout, op)?;
        v = dense_embed(&m, &circuit.layout, &flat)? * v;
    }
    Ok(PureState { layout: initial.layout.clone(), amps: v.iter().copied().collect() })
}

/// `exp(-iHt)` through the Hermitian eigendecomposition.
pub fn dense_hamiltonian_exp(h: &CMatrix, t: f64) -> CMatrix {
    expm_hermitian(h, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::pauli_x;
    use crate::linalg::ZERO;

    #[test]
    fn x_on_high_qubit() {
        let l = SystemLayout::new(2, vec![]).unwrap();
        let full = dense_embed(&pauli_x(), &l, &[1]).unwrap();
        // |q1 q0> = |00> (index 0) goes to |10> (index 2).
        assert_eq!(full[(2, 0)], ONE);
        assert_eq!(full[(1, 0)], ZERO);
    }
}
