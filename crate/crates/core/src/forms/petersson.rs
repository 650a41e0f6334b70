use super::{gamma_vector, FormsError, GramData, JacobiCuspFormExact};
use crate::poincare::AdmissiblePair;
use crate::rigor::matrix::solve;
use crate::rigor::{BallComplex, BallReal, Mag};

fn check(phi: &JacobiCuspFormExact, gram: &GramData) -> Result<(), FormsError> {
    if phi.k != gram.k || phi.n != gram.n {
        return Err(FormsError::InvariantViolation(format!(
            "form of weight {} index {} used with Gram of weight {} index {}",
            phi.k, phi.n, gram.k, gram.n
        )));
    }
    Ok(())
}

/// `⟨φ, ψ⟩ = γ_h(φ)^t Γ_h^{-1} conj(γ_h(ψ))`, via an interval solve of
/// `Γ_h x = conj(γ_h(ψ))`.
pub fn petersson(
    phi: &JacobiCuspFormExact,
    psi: &JacobiCuspFormExact,
    gram: &GramData,
) -> Result<BallComplex, FormsError> {
    petersson_real(phi, psi, gram).map(BallComplex::from_real)
}

/// [`petersson`] for real embeddings, where the product is real.
pub fn petersson_real(
    phi: &JacobiCuspFormExact,
    psi: &JacobiCuspFormExact,
    gram: &GramData,
) -> Result<BallReal, FormsError> {
    check(phi, gram)?;
    check(psi, gram)?;
    let prec = gram.precision_bits;
    let gp = gamma_vector(phi, &gram.anchors, prec)?;
    let gq = gamma_vector(psi, &gram.anchors, prec)?;
    if gram.anchors.is_empty() {
        return Ok(BallReal::zero(prec));
    }
    let x = solve(&gram.gram, &gq).map_err(|_| FormsError::SingularGram)?;
    let mut acc = BallReal::zero(prec);
    for (a, b) in gp.iter().zip(&x) {
        acc = &acc + &(a * b);
    }
    Ok(acc)
}

/// Euclidean norm of a real ball vector.
pub fn l2_norm(v: &[BallReal]) -> BallReal {
    let prec = v.first().map_or(64, |x| x.prec());
    let mut s = BallReal::zero(prec);
    for x in v {
        s = &s + &x.sqr();
    }
    // the sum of squares is nonnegative; clip a ball that dips below 0
    match s.sqrt() {
        Ok(r) => r,
        Err(_) => {
            let top = BallReal::new(s.upper(), Mag::ZERO, prec).sqrt().expect("upper end is nonnegative");
            BallReal::zero(prec).add_error(top.abs_upper())
        }
    }
}

/// `gram_eps · ‖γ_h(φ)‖₂ · ‖γ_h(ψ)‖₂`, the a priori error of a Petersson
/// product when `‖Γ - Γ̃‖_∞ <= gram_eps`.
pub fn predictive_error_vectors(gram_eps: f64, gp: &[BallReal], gq: &[BallReal]) -> BallReal {
    let prec = gp.first().or(gq.first()).map_or(64, |x| x.prec());
    BallReal::from_f64(gram_eps, prec) * l2_norm(gp) * l2_norm(gq)
}

pub fn predictive_error(
    gram_eps: f64,
    phi: &JacobiCuspFormExact,
    psi: &JacobiCuspFormExact,
    h: &[AdmissiblePair],
    prec: u32,
) -> Result<BallReal, FormsError> {
    let gp = gamma_vector(phi, h, prec)?;
    let gq = gamma_vector(psi, h, prec)?;
    Ok(predictive_error_vectors(gram_eps, &gp, &gq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: f64) -> BallReal {
        BallReal::from_f64(v, 64)
    }

    #[test]
    fn predictive_error_scaling() {
        let g = [b(3.0), b(4.0)];
        let h = [b(1.0)];
        assert!(predictive_error_vectors(0.0, &g, &h).contains_int(0));
        let e1 = predictive_error_vectors(1e-10, &g, &h).to_f64();
        let e2 = predictive_error_vectors(2e-10, &g, &h).to_f64();
        assert!((e1 - 5e-10).abs() < 1e-20);
        assert!((e2 - 2.0 * e1).abs() < 1e-20);
    }
}
