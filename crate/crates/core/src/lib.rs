//! Simulation and analysis of a BB84 variant that distills secret key from
//! the qubits Bob measured in the *other* basis.
//!
//! * [`gf2`]: binary linear algebra, linear codes, coset labels, syndrome decoding.
//! * [`quantum`]: single-qubit states, channels and Born-rule sampling.
//! * [`css`]: statevector CSS codewords and the mixture identities behind the security argument.
//! * [`protocol`]: the transmit / sift / estimate / reconcile / amplify pipeline.
//! * [`bounds`]: binary entropy, channel error rates, key-rate bounds and the
//!   matched-vs-mismatched trade-off check.
//!
//! The floating-point modules are generic over [`Real`]; the aliases below fix
//! the scalar to `f64`, which is what the protocol and CLI use.

pub mod bounds;
pub mod css;
pub mod gf2;
mod linalg;
pub mod protocol;
pub mod quantum;
pub mod rng;
mod scalar;

pub use gf2::{Gf2Error, Gf2Matrix, Gf2Vector, LinearCode};
pub use rng::RandomStream;
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type DensityOperator = quantum::DensityOperator<f64>;
pub type PureState = quantum::PureState<f64>;
pub type Channel = quantum::Channel<f64>;
pub type Unitary = quantum::Mat2<f64>;
pub type ChannelRates = bounds::ChannelRates<f64>;
pub type TradeoffReport = bounds::TradeoffReport<f64>;
pub type StateVector = css::StateVector<f64>;
pub type MultiQubitDensity = css::MultiQubitDensity<f64>;
