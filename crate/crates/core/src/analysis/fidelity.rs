use crate::error::{Error, Result};
use crate::linear::QubitMatrix;

/// `|Tr(U†V)| / √(2 Tr(V†V))` for a unitary `U`.
///
/// Insensitive to any complex rescaling of `V`, so loss and global phase do
/// not count against a gate. Equals 1 iff `V = cU`.
pub fn fidelity_up_to_phase(u: &QubitMatrix, v: &QubitMatrix) -> Result<f64> {
    let norm = v.frobenius_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroMap);
    }
    let overlap = (u.adjoint() * *v).trace().norm();
    Ok((overlap / (2.0 * norm).sqrt()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn examples() {
        let h = QubitMatrix::hadamard();
        assert!((fidelity_up_to_phase(&h, &h).unwrap() - 1.0).abs() < 1e-15);
        assert!((fidelity_up_to_phase(&h, &h.scale(Complex64::new(0.7, 0.0))).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity_up_to_phase(&QubitMatrix::identity(), &QubitMatrix::pauli_x()).unwrap(), 0.0);
        assert_eq!(fidelity_up_to_phase(&h, &QubitMatrix::zeros()).unwrap_err(), Error::ZeroMap);
    }
}
