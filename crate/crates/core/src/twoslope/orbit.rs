use std::cmp::Ordering;

use crate::config::Config;
use crate::map::Aiet;
use crate::numbers::Scalar;
use crate::walker::{Num, Stepper};

/// Forward orbit that stays exact until points outgrow `exact_bits`, then
/// continues on the dyadic grid `2^-dyadic_bits`.
pub(crate) struct Orbit {
    st: Stepper,
    x: Num,
    exact: bool,
    exact_bits: u64,
    dyadic_bits: u32,
}

impl Orbit {
    pub(crate) fn new(f: &Aiet, x: &Scalar, cfg: &Config) -> Orbit {
        let st = Stepper::new(f);
        let x = st.point(x);
        Orbit { st, x, exact: true, exact_bits: cfg.exact_bits, dyadic_bits: cfg.dyadic_bits }
    }

    pub(crate) fn stepper(&self) -> &Stepper {
        &self.st
    }

    /// Index of the piece containing the current point.
    pub(crate) fn piece(&self) -> usize {
        self.st.piece_of(&self.x)
    }

    pub(crate) fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn cmp_to(&self, y: &Num) -> Ordering {
        self.st.cmp(&self.x, y)
    }

    pub(crate) fn advance(&mut self) {
        let next = self.st.step(&self.x);
        self.x = if !self.exact {
            self.st.round_dyadic(&next, self.dyadic_bits)
        } else if next.bits() > self.exact_bits {
            self.exact = false;
            self.st.round_dyadic(&next, self.dyadic_bits)
        } else {
            next
        };
    }
}
