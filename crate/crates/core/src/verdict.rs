//! Outcome of a property check that may be conditional on hypotheses.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails(String),
    NotApplicable(String),
    HypothesisNotMet(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn from_bool(ok: bool, why: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails(why())
        }
    }

    /// The first failure if there is one, otherwise the first non-passing
    /// verdict, otherwise `Holds`.
    pub fn all<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        let mut first_other = None;
        for v in verdicts {
            match v {
                Verdict::Holds => {}
                Verdict::Fails(_) => return v,
                _ => {
                    first_other.get_or_insert(v);
                }
            }
        }
        first_other.unwrap_or(Verdict::Holds)
    }
}
