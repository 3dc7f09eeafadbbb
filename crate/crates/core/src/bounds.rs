//! Binary entropy, the eight channel error probabilities, the matched and
//! mismatched key-rate lower bounds, and the entropic-uncertainty check that
//! the two bounds are never simultaneously positive.

use serde::Serialize;

use crate::quantum::{born_probability, Basis, Channel, DensityOperator, PureState};
use crate::Real;

/// Slack allowed on every inequality of the trade-off check.
pub const TRADEOFF_SLACK: f64 = 1e-9;

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)` in bits, with `h(0) = h(1) = 0`.
///
/// Panics when `p` lies outside `[0, 1]`.
pub fn binary_entropy<T: Real>(p: T) -> T {
    assert!(
        p >= T::zero() && p <= T::one(),
        "binary entropy argument {p} outside [0, 1]"
    );
    xlog2x(p) + xlog2x(T::one() - p)
}

// −x log₂ x, zero below the entropy floor.
fn xlog2x<T: Real>(x: T) -> T {
    if x < T::ENTROPY_FLOOR {
        T::zero()
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy in bits of a two-outcome distribution `(p, 1 − p)`.
fn two_outcome_entropy<T: Real>(p0: T) -> T {
    binary_entropy(p0.max(T::zero()).min(T::one()))
}

/// The eight error probabilities of a channel plus their basis averages.
///
/// `p_*` are matched-basis error rates, `q_*` mismatched ones. Names follow
/// the prepared state: `p_x_plus` is the chance that `|+⟩` is read as `|−⟩`,
/// `q_x0` the chance that `|0⟩` is read as `|−⟩`, `q_z_plus` the chance
/// that `|+⟩` is read as `|1⟩`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelRates<T> {
    pub p_x_plus: T,
    pub p_x_minus: T,
    pub q_x0: T,
    pub q_x1: T,
    pub p_z0: T,
    pub p_z1: T,
    pub q_z_plus: T,
    pub q_z_minus: T,
    pub p_x: T,
    pub p_z: T,
    pub q_x: T,
    pub q_z: T,
}

impl<T: Real> ChannelRates<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_x_plus: T,
        p_x_minus: T,
        q_x0: T,
        q_x1: T,
        p_z0: T,
        p_z1: T,
        q_z_plus: T,
        q_z_minus: T,
    ) -> Self {
        let two = T::lit(2.0);
        Self {
            p_x_plus,
            p_x_minus,
            q_x0,
            q_x1,
            p_z0,
            p_z1,
            q_z_plus,
            q_z_minus,
            p_x: (p_x_plus + p_x_minus) / two,
            p_z: (p_z0 + p_z1) / two,
            q_x: (q_x0 + q_x1) / two,
            q_z: (q_z_plus + q_z_minus) / two,
        }
    }
}

/// Probability that `(sent_basis, sent_bit)` is read as the other bit of `measured`.
fn flip_probability<T: Real>(ch: &Channel<T>, sent: Basis, bit: u8, measured: Basis) -> T {
    let out = ch.apply(&PureState::basis_vector(sent, bit).density());
    born_probability(&out, measured, 1 - bit)
}

pub fn analytic_rates<T: Real>(ch: &Channel<T>) -> ChannelRates<T> {
    use Basis::{X, Z};
    ChannelRates::new(
        flip_probability(ch, X, 0, X),
        flip_probability(ch, X, 1, X),
        flip_probability(ch, Z, 0, X),
        flip_probability(ch, Z, 1, X),
        flip_probability(ch, Z, 0, Z),
        flip_probability(ch, Z, 1, Z),
        flip_probability(ch, X, 0, Z),
        flip_probability(ch, X, 1, Z),
    )
}

/// `1 − h(p_x) − h(p_z)`: standard BB84 on the matched outcomes.
pub fn matched_rate_bound<T: Real>(r: &ChannelRates<T>) -> T {
    T::one() - binary_entropy(r.p_x) - binary_entropy(r.p_z)
}

/// `1 − h(q_x) − h(q_z)`: key from the mismatched outcomes.
pub fn mismatched_rate_bound<T: Real>(r: &ChannelRates<T>) -> T {
    T::one() - binary_entropy(r.q_x) - binary_entropy(r.q_z)
}

/// `H(P01) + H(P+−)` for the Z- and X-basis outcome distributions of `rho`.
pub fn uncertainty_sum<T: Real>(rho: &DensityOperator<T>) -> T {
    two_outcome_entropy(born_probability(rho, Basis::Z, 0))
        + two_outcome_entropy(born_probability(rho, Basis::X, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TradeoffReport<T> {
    pub rates: ChannelRates<T>,
    /// `h(p_x_plus) + h(q_z_plus)`
    pub lhs_f1: T,
    /// `h(p_x_minus) + h(q_z_minus)`
    pub lhs_f2: T,
    /// `h(p_z0) + h(q_x0)`
    pub lhs_f3: T,
    /// `h(p_z1) + h(q_x1)`
    pub lhs_f4: T,
    /// `h(p_x) + h(q_z)`
    pub lhs_f9: T,
    /// `h(p_z) + h(q_x)`
    pub lhs_f10: T,
    pub matched_bound: T,
    pub mismatched_bound: T,
    pub f11_sum: T,
    pub all_satisfied: bool,
}

impl<T: Real> TradeoffReport<T> {
    /// Smallest of the six lower-bounded sums.
    pub fn min_pair_sum(&self) -> T {
        [
            self.lhs_f1,
            self.lhs_f2,
            self.lhs_f3,
            self.lhs_f4,
            self.lhs_f9,
            self.lhs_f10,
        ]
        .into_iter()
        .fold(T::infinity(), T::min)
    }
}

pub fn verify_tradeoff<T: Real>(ch: &Channel<T>) -> TradeoffReport<T> {
    let r = analytic_rates(ch);
    let h = binary_entropy::<T>;
    let lhs_f1 = h(r.p_x_plus) + h(r.q_z_plus);
    let lhs_f2 = h(r.p_x_minus) + h(r.q_z_minus);
    let lhs_f3 = h(r.p_z0) + h(r.q_x0);
    let lhs_f4 = h(r.p_z1) + h(r.q_x1);
    let lhs_f9 = h(r.p_x) + h(r.q_z);
    let lhs_f10 = h(r.p_z) + h(r.q_x);
    let matched_bound = matched_rate_bound(&r);
    let mismatched_bound = mismatched_rate_bound(&r);
    let f11_sum = matched_bound + mismatched_bound;
    let slack = T::lit(TRADEOFF_SLACK);
    let floor = T::one() - slack;
    let all_satisfied = [lhs_f1, lhs_f2, lhs_f3, lhs_f4, lhs_f9, lhs_f10]
        .iter()
        .all(|&s| s >= floor)
        && f11_sum <= slack;
    TradeoffReport {
        rates: r,
        lhs_f1,
        lhs_f2,
        lhs_f3,
        lhs_f4,
        lhs_f9,
        lhs_f10,
        matched_bound,
        mismatched_bound,
        f11_sum,
        all_satisfied,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_channel, random_density, random_pure_state, NamedUnitary};
    use crate::rng::stream;
    use rand::Rng;

    // Independent entropy evaluation with natural logs.
    fn h_ln(p: f64) -> f64 {
        let t = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
        (t(p) + t(1.0 - p)) / std::f64::consts::LN_2
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5f64), 1.0);
        assert_eq!(binary_entropy(0.0f64), 0.0);
        assert_eq!(binary_entropy(1.0f64), 0.0);
        assert!((binary_entropy(0.05f64) - 0.2864).abs() < 1e-4);
        assert!((binary_entropy(0.05f64) - h_ln(0.05)).abs() < 1e-14);
        assert!((binary_entropy(0.3f32) - h_ln(0.3) as f32).abs() < 1e-6);
    }

    #[test]
    #[should_panic(expected = "outside [0, 1]")]
    fn entropy_rejects_out_of_range() {
        binary_entropy(1.5f64);
    }

    #[test]
    fn entropy_symmetric_and_concave() {
        let mut rng = stream(10);
        for _ in 0..10_000 {
            let p: f64 = rng.random();
            let q: f64 = rng.random();
            assert!((binary_entropy(p) - binary_entropy(1.0 - p)).abs() < 1e-12);
            let mid = binary_entropy((p + q) / 2.0);
            assert!(mid >= (binary_entropy(p) + binary_entropy(q)) / 2.0 - 1e-12);
        }
    }

    #[test]
    fn identity_and_hadamard_rates() {
        let id = analytic_rates(&Channel::<f64>::identity());
        assert!(id.p_x.abs() < 1e-15 && id.p_z.abs() < 1e-15);
        assert!((id.q_x - 0.5).abs() < 1e-15 && (id.q_z - 0.5).abs() < 1e-15);
        let had = analytic_rates(&Channel::<f64>::hadamard());
        assert!(had.q_x.abs() < 1e-15 && had.q_z.abs() < 1e-15);
        assert!((had.p_x - 0.5).abs() < 1e-15 && (had.p_z - 0.5).abs() < 1e-15);
        assert!((matched_rate_bound(&id) - 1.0).abs() < 1e-12);
        assert!((mismatched_rate_bound(&id) + 1.0).abs() < 1e-12);
        assert!((matched_rate_bound(&had) + 1.0).abs() < 1e-12);
        assert!((mismatched_rate_bound(&had) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_rates_follow_branch_sums() {
        let r = analytic_rates(&Channel::<f64>::gamma(0.05, 0.03, 0.02).unwrap());
        assert!((r.q_x - 0.07).abs() < 1e-12);
        assert!((r.q_z - 0.05).abs() < 1e-12);
        // Each individual rate equals its average for a Pauli-type channel.
        assert!((r.q_x0 - r.q_x1).abs() < 1e-12);
    }

    #[test]
    fn ninety_ten_mixture_bounds() {
        let ch = Channel::<f64>::named_mixture(&[(0.9, NamedUnitary::H), (0.1, NamedUnitary::I)]).unwrap();
        let r = analytic_rates(&ch);
        assert!((r.q_x - 0.05).abs() < 1e-12 && (r.p_x - 0.45).abs() < 1e-12);
        assert!((matched_rate_bound(&r) - (1.0 - 2.0 * h_ln(0.45))).abs() < 1e-12);
        assert!((matched_rate_bound(&r) + 0.9855).abs() < 1e-3);
        assert!((mismatched_rate_bound(&r) - 0.4272).abs() < 1e-3);
    }

    #[test]
    fn uncertainty_examples() {
        let zero = PureState::<f64>::zero().density();
        assert!((uncertainty_sum(&zero) - 1.0).abs() < 1e-12);
        assert!((uncertainty_sum(&DensityOperator::<f64>::maximally_mixed()) - 2.0).abs() < 1e-12);
        let mut rng = stream(11);
        for _ in 0..10_000 {
            let psi = random_pure_state::<f64, _>(&mut rng);
            assert!(uncertainty_sum(&psi.density()) >= 1.0 - 1e-9);
            assert!(uncertainty_sum(&random_density::<f64, _>(&mut rng)) >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn tradeoff_equality_cases() {
        for ch in [Channel::<f64>::identity(), Channel::hadamard()] {
            let rep = verify_tradeoff(&ch);
            assert!(rep.all_satisfied);
            assert!(rep.f11_sum.abs() < 1e-9);
        }
    }

    #[test]
    fn tradeoff_holds_for_random_channels() {
        let mut rng = stream(12);
        for _ in 0..1000 {
            let rep = verify_tradeoff(&random_channel::<f64, _>(&mut rng));
            assert!(rep.all_satisfied, "{rep:?}");
            assert!((rep.f11_sum - (rep.matched_bound + rep.mismatched_bound)).abs() == 0.0);
        }
    }

    #[test]
    fn bounds_never_exceed_one() {
        let mut rng = stream(13);
        for _ in 0..500 {
            let r = analytic_rates(&random_channel::<f64, _>(&mut rng));
            assert!(matched_rate_bound(&r) <= 1.0 && mismatched_rate_bound(&r) <= 1.0);
        }
        // Equality when both rates are 0 or 1.
        let flip = Channel::<f64>::named_mixture(&[(1.0, NamedUnitary::HX)]).unwrap();
        let r = analytic_rates(&flip);
        assert!((r.q_x - 1.0).abs() < 1e-12 && r.q_z.abs() < 1e-12);
        assert!((mismatched_rate_bound(&r) - 1.0).abs() < 1e-12);
    }
}
