//! Exact computations with representations of strongly locally finite
//! quivers: Hom and Ext, membership in the category of finite extensions of
//! finitely co-presented by finitely presented representations, and
//! Auslander-Reiten translates, almost split sequences and components.
//!
//! ```
//! use arknit_core::{quiver::Quiver, rep::Rep, Rat};
//! let q = Quiver::linear_a(3);
//! let p1 = Rep::<Rat>::projective(&q, q.vertex("1").unwrap()).unwrap();
//! let dims: Vec<usize> = ["1", "2", "3"].iter().map(|l| p1.dim(q.vertex(l).unwrap()).unwrap()).collect();
//! assert_eq!(dims, vec![1, 1, 1]);
//! ```

pub mod ar;
pub mod error;
pub mod field;
pub mod hom;
pub mod io;
pub mod linalg;
pub mod present;
pub mod quiver;
pub mod rep;
pub mod structure;

pub use error::{Error, Result};
pub use field::{Field, Fp};

pub type Rat = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type RatMat = linalg::Mat<Rat>;

/// Window sizes used by every semi-decision procedure: start at `radius`,
/// grow by `step`, give up beyond `max_radius`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    pub radius: usize,
    pub step: usize,
    pub max_radius: usize,
}

impl Budget {
    pub fn new(radius: usize, step: usize, max_radius: usize) -> Self {
        Budget { radius, step: step.max(1), max_radius: max_radius.max(radius) }
    }

    /// Radii visited by a growing search.
    pub fn radii(&self) -> impl Iterator<Item = usize> {
        let (r, s, m) = (self.radius, self.step, self.max_radius);
        (0..).map(move |i| r + i * s).take_while(move |&x| x <= m)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(6, 3, 24)
    }
}
