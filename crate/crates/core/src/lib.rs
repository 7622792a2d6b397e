//! Exact Masur–Veech volumes of strata of meromorphic quadratic differentials
//! with at most simple poles.
//!
//! Volumes are obtained by counting pillowcase covers: the generating function
//! of covers is a weighted sum of central characters over balanced partitions,
//! which is fitted exactly to a polynomial in level-2 quasi-modular forms. The
//! connected part is isolated by Möbius inversion over decompositions into
//! substrata, and the leading asymptotics as `q -> 1` give the volume as a
//! rational multiple of a power of π.
//!
//! Module map:
//!
//! - [`strata`]: stratum signatures, the `(μ, ν)` encoding and invariants.
//! - [`exact`]: rationals, π-graded values, truncated series, Laurent
//!   expansions in `1/h`, exact linear solving.
//! - [`partitions`]: partitions, characters, central characters and the
//!   shifted symmetric functions `p_k`, `p̄_k`.
//! - [`quasimodular`]: Eisenstein series, monomial bases, fitting and the
//!   modular substitution.
//! - [`genfun`]: the cover generating functions `Z'`, `Z°` (pillowcase and
//!   torus) and the interpolation route through shifted symmetric functions.
//! - [`volume`]: volume extraction, normalization conversions and closed forms.
//! - [`oracle`]: brute-force monodromy enumeration, lattice-count estimates and
//!   numeric validators for the asymptotic sum identities.
//! - [`table`], [`cache`]: the shipped volume table and on-disk caches.

pub mod cache;
pub mod error;
pub mod exact;
pub mod exec;
pub mod genfun;
pub mod hp;
pub mod oracle;
pub mod partitions;
pub mod quasimodular;
pub mod strata;
pub mod table;
pub mod volume;

pub use error::{Error, Result};
pub use exact::{HLaurent, PiPoly, QSeries, Rational};
pub use exec::Exec;
pub use strata::{ProfilePair, StratumInvariants, StratumSignature};
