//! Derivative-free 1-D minimization.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`. Returns `(x, f(x))` of the best point
/// evaluated.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, width: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| Ok((x - 1.3).powi(2) + 2.0), -4.0, 5.0, 1e-9).unwrap();
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn monotone_function_ends_at_edge() {
        let (x, _) = golden_section(Ok, 0.0, 1.0, 1e-6).unwrap();
        assert!(x < 1e-5);
    }

    #[test]
    fn errors_propagate() {
        let r = golden_section(
            |_| Err(crate::error::Error::Domain("boom".into())),
            0.0,
            1.0,
            1e-3,
        );
        assert!(r.is_err());
    }
}
