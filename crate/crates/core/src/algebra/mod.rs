//! Exact arithmetic: integer polynomials in `q`, polynomials in `t` over
//! `Z[q]`, rationals, and palindromic completion.

mod qpoly;
mod tqpoly;

pub use qpoly::QPoly;
pub use tqpoly::{complete_palindromic, TQPoly};

use thiserror::Error;

/// Reduced rational with positive denominator.
pub type QRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("samples are not consistent with a polynomial of the given degree")]
    InconsistentSamples,
    #[error("interpolating polynomial has non-integer coefficients")]
    NonIntegerCoefficients,
    #[error("need {needed} distinct sample points, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("palindromic completion failed: {0}")]
    NotCompletable(String),
    #[error("coefficient of t^{t_power} is not divisible by q^(2*{t_power})")]
    NotDivisible { t_power: usize },
}

#[cfg(test)]
mod proptests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn qpoly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-50i64..50, 0..6).prop_map(|c| QPoly::from_i64s(&c))
    }

    fn tqpoly() -> impl Strategy<Value = TQPoly> {
        prop::collection::vec(qpoly(), 0..5).prop_map(TQPoly::new)
    }

    proptest! {
        #[test]
        fn qpoly_ring_laws(a in qpoly(), b in qpoly(), c in qpoly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn tqpoly_ring_laws(a in tqpoly(), b in tqpoly(), c in tqpoly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn shift_roundtrip(a in qpoly()) {
            prop_assert_eq!(a.shift_to_u().shift_from_u(), a.clone());
            // value at q = u + 1
            let u0 = BigInt::from(3);
            prop_assert_eq!(a.shift_to_u().eval(&u0), a.eval(&(u0 + 1)));
        }

        #[test]
        fn interpolation_recovers(a in qpoly()) {
            let d = a.degree().unwrap_or(0);
            let samples: Vec<_> = (0..=d as i64 + 2)
                .map(|x| (BigInt::from(x), a.eval_i64(x)))
                .collect();
            prop_assert_eq!(QPoly::interpolate(&samples, d).unwrap(), a);
        }

        #[test]
        fn scaling_roundtrip(a in tqpoly()) {
            let lifted = a.unscale_t_by_qsquared();
            prop_assert_eq!(lifted.scale_t_by_qsquared().unwrap(), a);
        }

        #[test]
        fn completion_yields_palindromic(
            d in 1usize..8,
            mids in prop::collection::vec(qpoly(), 8),
        ) {
            // Build a palindromic Z with Z(0) = 1, read off `known` below degree d/2
            // arbitrarily, and check completion reproduces a valid P.
            let mut z = vec![QPoly::zero(); d + 1];
            z[0] = QPoly::one();
            z[d] = QPoly::one();
            for i in 1..=d / 2 {
                z[i] = mids[i].clone();
                z[d - i] = mids[i].clone();
            }
            let mut known = z.clone();
            known[0] = QPoly::zero();
            for (i, k) in known.iter_mut().enumerate().take(d.div_ceil(2)).skip(1) {
                *k = &mids[i] - &mids[(i + 3) % 8];
            }
            let known = TQPoly::new(known);
            let p = TQPoly::palindromic_complete(&known, d).unwrap();
            prop_assert_eq!(p.coeff(0), QPoly::one());
            prop_assert!(2 * p.degree().unwrap() < d);
            prop_assert!((&p + &known).is_palindromic_of_degree(d));
            prop_assert!(!p.is_zero());
        }
    }
}
