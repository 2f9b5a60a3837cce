//! Crate-private summary statistics.

use crate::real::Real;

pub(crate) fn mean<T: Real>(xs: &[T]) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    let sum = xs.iter().fold(T::zero(), |a, &x| a + x);
    Some(sum / T::of_usize(xs.len()))
}

/// Population standard deviation (divides by n, not n-1).
pub(crate) fn pop_std<T: Real>(xs: &[T]) -> Option<T> {
    let m = mean(xs)?;
    let ss = xs.iter().fold(T::zero(), |a, &x| {
        let d = x - m;
        a + d * d
    });
    Some((ss / T::of_usize(xs.len())).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std() {
        assert_eq!(mean::<f64>(&[]), None);
        assert_eq!(mean(&[2.0, 4.0]), Some(3.0));
        assert_eq!(pop_std(&[1.0, 1.0, 1.0]), Some(0.0));
        // population convention: std of {0, 2} is 1, not sqrt(2)
        assert_eq!(pop_std(&[0.0, 2.0]), Some(1.0));
    }
}
