//! Roots as integer vectors over the simple-root basis, together with the
//! pairing, reflection and shifted-action operations.

use crate::base::cartan::CartanData;
use crate::base::scalar::Scalar;
use crate::base::weight::Weight;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Real or imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    Real,
    Imaginary,
}

/// An element of the root lattice known to be a root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    /// Wrap a vector, checking that it is a root of the given system.
    pub fn new(cartan: &CartanData, coords: Vec<i64>) -> Result<Root> {
        if cartan.is_real_root(&coords) || cartan.is_imaginary_root(&coords) {
            Ok(Root { coords })
        } else {
            Err(Error::Parse(format!("{coords:?} is not a root")))
        }
    }

    pub fn simple(cartan: &CartanData, i: usize) -> Root {
        let mut coords = vec![0i64; cartan.nodes];
        coords[i] = 1;
        Root { coords }
    }

    pub fn kind(&self, cartan: &CartanData) -> RootKind {
        if cartan.is_imaginary_root(&self.coords) {
            RootKind::Imaginary
        } else {
            RootKind::Real
        }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    /// Positive iff all coordinates are >= 0 (roots have a definite sign).
    pub fn is_positive(&self) -> bool {
        is_positive_vec(&self.coords)
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

/// Sign test on a root vector.
pub fn is_positive_vec(v: &[i64]) -> bool {
    debug_assert!(
        v.iter().all(|&x| x >= 0) || v.iter().all(|&x| x <= 0),
        "root vectors have a definite sign: {v:?}"
    );
    v.iter().sum::<i64>() > 0
}

/// `(alpha^vee, lambda)` for a real root alpha.
pub fn pairing(cartan: &CartanData, alpha: &Root, lambda: &Weight) -> Result<Scalar> {
    if alpha.kind(cartan) == RootKind::Imaginary {
        return Err(Error::ImaginaryCoroot);
    }
    Ok(pairing_unchecked(cartan, &alpha.coords, lambda))
}

/// `(alpha^vee, lambda) = sum_i n_i d_i <h_i, lambda> * 2/(alpha, alpha)`,
/// for a vector already known to be a real root.
pub fn pairing_unchecked(cartan: &CartanData, alpha: &[i64], lambda: &Weight) -> Scalar {
    let mut acc = Scalar::zero();
    for i in 0..cartan.nodes {
        if alpha[i] == 0 {
            continue;
        }
        let w = Scalar::from_rational(&cartan.d[i] * BigRational::from_integer(BigInt::from(alpha[i])));
        acc += w * lambda.h[i].clone();
    }
    let norm_half = cartan.norm_half(alpha);
    acc.scale_rat(&norm_half.recip())
}

/// Unshifted reflection `s_alpha(lambda) = lambda - (alpha^vee, lambda) alpha`.
pub fn reflect(cartan: &CartanData, alpha: &Root, lambda: &Weight) -> Result<Weight> {
    let p = pairing(cartan, alpha, lambda)?;
    Ok(lambda.add_root(cartan, &alpha.coords, &(-p)))
}

/// `s_alpha(beta)` for roots; output has integer coordinates.
pub fn reflect_root(cartan: &CartanData, alpha: &Root, beta: &Root) -> Result<Root> {
    if alpha.kind(cartan) == RootKind::Imaginary {
        return Err(Error::ImaginaryCoroot);
    }
    Ok(Root {
        coords: reflect_vec(cartan, &alpha.coords, &beta.coords),
    })
}

/// `s_alpha(v)` on root-lattice vectors, alpha a real root.
pub fn reflect_vec(cartan: &CartanData, alpha: &[i64], v: &[i64]) -> Vec<i64> {
    let c = cartan.coroot_pairing(alpha, v);
    (0..cartan.nodes).map(|i| v[i] - c * alpha[i]).collect()
}

/// Shifted action of a word of reflections:
/// `w o lambda = w(lambda + rho) - rho` with `w = s_{beta_1} ... s_{beta_k}`
/// applied as a group element (rightmost letter acts first).
pub fn shifted_action(cartan: &CartanData, word: &[Root], lambda: &Weight) -> Result<Weight> {
    let mut v = lambda.plus_rho(cartan);
    for beta in word.iter().rev() {
        v = reflect(cartan, beta, &v)?;
    }
    Ok(v.sub(&Weight::rho(cartan)))
}

/// Shifted reflection in a single real root.
pub fn shifted_reflect(cartan: &CartanData, beta: &Root, lambda: &Weight) -> Result<Weight> {
    shifted_action(cartan, std::slice::from_ref(beta), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::scalar::Scalar;

    fn a1aff() -> CartanData {
        CartanData::from_type("A1~").unwrap()
    }

    #[test]
    fn pairing_with_rho_is_one() {
        let c = a1aff();
        let rho = Weight::rho(&c);
        for i in 0..2 {
            let a = Root::simple(&c, i);
            assert_eq!(pairing(&c, &a, &rho).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn pairing_level_half_example() {
        // (alpha_1 + delta)^vee paired with lambda+rho at pairings (0, 1/2) gives 1
        let c = a1aff();
        let lam_rho = Weight::new(vec![Scalar::zero(), Scalar::from_frac(1, 2)], Some(Scalar::zero()));
        let a = Root::new(&c, vec![1, 2]).unwrap(); // alpha_1 + delta
        assert_eq!(pairing(&c, &a, &lam_rho).unwrap(), Scalar::one());
    }

    #[test]
    fn pairing_is_odd() {
        let c = a1aff();
        let lam = Weight::new(vec![Scalar::from_frac(3, 7), Scalar::sqrt2()], Some(Scalar::zero()));
        let a0 = Root::simple(&c, 0);
        let m = a0.neg();
        assert_eq!(
            pairing(&c, &m, &lam).unwrap(),
            -pairing(&c, &a0, &lam).unwrap()
        );
    }

    #[test]
    fn imaginary_coroot_rejected() {
        let c = a1aff();
        let delta = Root::new(&c, vec![1, 1]).unwrap();
        let rho = Weight::rho(&c);
        assert_eq!(pairing(&c, &delta, &rho), Err(Error::ImaginaryCoroot));
        assert_eq!(reflect(&c, &delta, &rho), Err(Error::ImaginaryCoroot));
    }

    #[test]
    fn reflect_rho_by_simple() {
        let c = a1aff();
        let a1 = Root::simple(&c, 1);
        let rho = Weight::rho(&c);
        let r = reflect(&c, &a1, &rho).unwrap();
        // rho - alpha_1
        assert_eq!(r, rho.add_root(&c, &[0, 1], &Scalar::from_int(-1)));
        // involution
        assert_eq!(reflect(&c, &a1, &r).unwrap(), rho);
    }

    #[test]
    fn reflect_root_spec_value() {
        let c = a1aff();
        let a0 = Root::simple(&c, 0);
        let b = Root::new(&c, vec![1, 2]).unwrap(); // alpha_1 + delta
        let img = reflect_root(&c, &a0, &b).unwrap();
        assert_eq!(img.coords, vec![3, 2]); // -alpha_1 + 3 delta
    }

    #[test]
    fn reflection_preserves_form() {
        let c = CartanData::from_type("C2~").unwrap();
        let a = Root::simple(&c, 1);
        let x = Root::new(&c, {
            let d = c.delta_coeffs.clone().unwrap();
            d.iter().zip([0, 1, 0]).map(|(m, e)| m + e).collect()
        })
        .unwrap();
        let y = Root::simple(&c, 2);
        let sx = reflect_root(&c, &a, &x).unwrap();
        let sy = reflect_root(&c, &a, &y).unwrap();
        assert_eq!(c.form_roots(&sx.coords, &sy.coords), c.form_roots(&x.coords, &y.coords));
    }

    #[test]
    fn shifted_action_values() {
        let c = a1aff();
        let zero = Weight::zero(&c);
        // e o lambda = lambda
        assert_eq!(shifted_action(&c, &[], &zero).unwrap(), zero);
        // s_1 o 0 = -alpha_1
        let a1 = Root::simple(&c, 1);
        let got = shifted_action(&c, std::slice::from_ref(&a1), &zero).unwrap();
        assert_eq!(got, zero.add_root(&c, &[0, 1], &Scalar::from_int(-1)));
        // s_0 s_1 o 0 = -(3 alpha_0 + alpha_1), by composing the two reflections
        let a0 = Root::simple(&c, 0);
        let w = vec![a0, a1];
        let got = shifted_action(&c, &w, &zero).unwrap();
        let expect = zero
            .add_root(&c, &[1, 0], &Scalar::from_int(-3))
            .add_root(&c, &[0, 1], &Scalar::from_int(-1));
        assert_eq!(got, expect);
    }

    #[test]
    fn shifted_action_fixes_level() {
        let c = a1aff();
        let lam = Weight::new(
            vec![Scalar::from_frac(2, 3), Scalar::from_frac(-1, 5)],
            Some(Scalar::from_int(1)),
        );
        let a0 = Root::simple(&c, 0);
        let moved = shifted_action(&c, std::slice::from_ref(&a0), &lam).unwrap();
        assert_eq!(
            moved.plus_rho(&c).level(&c),
            lam.plus_rho(&c).level(&c)
        );
    }
}
