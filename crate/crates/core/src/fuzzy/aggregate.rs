use super::FuzzyError;

/// Weighted mean `sum(w * mu) / sum(w)` of `(degree, weight)` pairs.
///
/// The result is clamped to the range of the input degrees so rounding can
/// never push it outside `[min mu, max mu]`.
pub fn weighted_score(parts: &[(f64, f64)]) -> Result<f64, FuzzyError> {
    if parts.is_empty() {
        return Err(FuzzyError::EmptyArgument("weighted parts"));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (index, &(degree, weight)) in parts.iter().enumerate() {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(FuzzyError::NonPositiveWeight { index, weight });
        }
        if !(0.0..=1.0).contains(&degree) {
            return Err(FuzzyError::DegreeOutOfRange(degree));
        }
        num += weight * degree;
        den += weight;
        lo = lo.min(degree);
        hi = hi.max(degree);
    }
    Ok((num / den).clamp(lo, hi))
}
