use sg_tree_core::{DecoratedTree, Label, Rational};

/// The sine-Gordon rule: a kernel edge may carry, from above, any number of
/// kernel edges with or without a single noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSg {
    pub beta_bar: Rational,
}

impl RuleSg {
    pub fn new(beta_bar: Rational) -> Self {
        Self { beta_bar }
    }

    /// Homogeneity of the kernel type.
    pub fn kernel_homogeneity(&self) -> Rational {
        Rational::from_integer(2)
    }

    /// Homogeneity of either noise type.
    pub fn noise_homogeneity(&self) -> Rational {
        -self.beta_bar
    }

    /// `reg(t) = 7(2 − β̄)/8`.
    pub fn reg_kernel(&self) -> Rational {
        Rational::new(7, 8) * (Rational::from_integer(2) - self.beta_bar)
    }

    /// `reg(±) = −(2 + 7β̄)/8`.
    pub fn reg_noise(&self) -> Rational {
        -(Rational::from_integer(2) + Rational::from_integer(7) * self.beta_bar) / Rational::from_integer(8)
    }

    /// Margins of the subcriticality inequalities for a candidate `reg`.
    ///
    /// Returns `(kernel, noise)` where
    /// `kernel = |t| + min_N reg(N) − reg(t)` over the node types `I^n`, `Ξ±I^n`
    /// and `noise = |±| + reg(1) − reg(±)`. Subcriticality needs both > 0.
    pub fn subcriticality_margins(&self, reg_kernel: Rational, reg_noise: Rational) -> (Rational, Rational) {
        // reg(I^n) = n·reg(t) and reg(Ξ±I^n) = reg(±) + n·reg(t); with
        // reg(t) ≥ 0 the minimum is at n = 0.
        let min_node = if reg_kernel >= Rational::from_integer(0) {
            reg_noise.min(Rational::from_integer(0))
        } else {
            // unbounded below
            return (Rational::from_integer(-1), self.noise_homogeneity() - reg_noise);
        };
        (self.kernel_homogeneity() + min_node - reg_kernel, self.noise_homogeneity() - reg_noise)
    }

    /// Whether every node of `tree` is of an allowed type.
    ///
    /// Noises sit on nodes, so any node is `X^k Ξ^l I^n`; the only excluded
    /// shape is a kernel edge ending on a bare monomial, which the kernel
    /// annihilates.
    pub fn conforms(&self, tree: &DecoratedTree) -> bool {
        tree.children().iter().all(|c| {
            !(c.label() == Label::Zero && c.children().is_empty()) && self.conforms(c)
        })
    }
}
