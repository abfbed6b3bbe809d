//! Three-valued outcomes. Sampled-sup estimates can certify neither a
//! theorem nor its failure, so `Inconclusive` is a first-class citizen and
//! maps to its own process exit code.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Outcome of a structural-condition check, with the best constant the
/// sampled supremum produced.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    /// Best constant witnessing the condition (e.g. k1 for the kernel
    /// doubling bound); meaningful when the verdict is `Holds`.
    pub constant: f64,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (constant {:.6e})",
            self.condition, self.verdict, self.constant
        )
    }
}
