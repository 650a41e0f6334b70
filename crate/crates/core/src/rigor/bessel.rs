use super::{gamma_half, BallReal, Mag, RigorError};

/// `J_ν(x)` for `ν = m + 1/2`, from the ascending series
/// `(x/2)^ν / Γ(ν+1) · Σ_j (-x²/4)^j / (j! (ν+1)_j)`.
///
/// The series is summed at extra precision (its terms peak near `e^x`) and
/// cut once the term ratio is at most 1/2 and the term is negligible; the
/// remaining tail is bounded by the last term and added to the radius.
pub fn bessel_j_half(m: u32, x: &BallReal) -> Result<BallReal, RigorError> {
    let prec = x.prec();
    if x.mid().is_zero() && x.rad().is_zero() {
        return Ok(BallReal::zero(prec));
    }
    assert!(!x.mid().is_negative(), "bessel_j_half needs x.mid >= 0");
    let xu = x.abs_upper();
    // Γ(ν+1) = Γ(m + 3/2)
    let gamma = gamma_half(m + 1, prec + 16);
    if x.lower().signum() <= 0 {
        // |J_ν(x)| <= (x/2)^ν / Γ(ν+1) on [0, x_upper]
        let half = xu.mul_2exp(-1);
        let b = BallReal::new(half.to_dyadic(), Mag::ZERO, prec + 16);
        let bound = b.powi(m) * b.sqrt()?;
        let bound = bound.div(&gamma)?;
        return Ok(BallReal::zero(prec).add_error(bound.abs_upper()));
    }
    let guard = (xu.to_f64() * std::f64::consts::LOG2_E).ceil() as u32 + 16;
    let wp = prec + guard;
    let xw = x.with_prec(wp);
    let y = xw.sqr().mul_2exp(-2);
    let y_up = y.abs_upper();
    let mut sum = BallReal::one(wp);
    let mut term = BallReal::one(wp);
    let cap = 64 + 8 * (wp as u64 + xu.to_f64() as u64);
    let small = Mag::pow2(-(wp as i64));
    let mut j: u64 = 0;
    loop {
        // term_{j+1} = -term_j * y / ((j+1)(ν+1+j)),  ν+1+j = (2m+3+2j)/2
        let den = (j + 1) * (2 * m as u64 + 3 + 2 * j);
        term = (&term * &y).mul_int(-2).div_int(den as i64);
        sum = &sum + &term;
        j += 1;
        let next_den = (j + 1) * (2 * m as u64 + 3 + 2 * j);
        let ratio = y_up.mul_2exp(1).div(Mag::from_u64(next_den));
        if ratio <= Mag::pow2(-1) && term.abs_upper() <= small {
            // alternating-sign tail bounded geometrically by 2·|term|·ratio
            let tail = term.abs_upper().mul(ratio).mul_2exp(1);
            sum = sum.add_error(tail);
            break;
        }
        if j > cap {
            return Err(RigorError::NonConvergentTail);
        }
    }
    let half = xw.mul_2exp(-1);
    let pref = half.powi(m) * half.sqrt()?;
    let pref = pref.div(&gamma.with_prec(wp))?;
    Ok((pref * sum).with_prec(prec))
}
