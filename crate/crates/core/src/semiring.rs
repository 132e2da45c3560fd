//! The grade algebras for the box modality.
//!
//! Two preordered semirings grade boxes: the two-point security semiring
//! (`Private`, `Public`) and the usage-count semiring over the naturals.
//! For security grades, `0 = Private` and `1 = Public`; addition keeps a
//! result public only when either operand already is, and multiplication
//! keeps a result public only when both operands are, so `Private`
//! annihilates under product. The approximation preorder is generated by
//! `Private ⊑ Public` alone. Usage grades are ordinary natural addition
//! and multiplication, ordered by equality: a usage grade promises an
//! exact count, not a bound.

use std::fmt;

/// Which semiring a grade belongs to. Grades from different semirings
/// never meet in one operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiringTag {
    Security,
    Usage,
}

impl fmt::Display for SemiringTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringTag::Security => f.write_str("Security"),
            SemiringTag::Usage => f.write_str("Usage"),
        }
    }
}

/// An element of one of the two grade semirings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    SecPublic,
    SecPrivate,
    Usage(u64),
}

/// Operands drawn from different semirings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TagMismatch {
    pub left: SemiringTag,
    pub right: SemiringTag,
}

impl fmt::Display for TagMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot combine {} and {} grades", self.left, self.right)
    }
}

impl std::error::Error for TagMismatch {}

impl Grade {
    pub fn tag(&self) -> SemiringTag {
        match self {
            Grade::SecPublic | Grade::SecPrivate => SemiringTag::Security,
            Grade::Usage(_) => SemiringTag::Usage,
        }
    }

    /// The additive unit of the tagged semiring.
    pub fn zero(tag: SemiringTag) -> Grade {
        match tag {
            SemiringTag::Security => Grade::SecPrivate,
            SemiringTag::Usage => Grade::Usage(0),
        }
    }

    /// The multiplicative unit of the tagged semiring.
    pub fn one(tag: SemiringTag) -> Grade {
        match tag {
            SemiringTag::Security => Grade::SecPublic,
            SemiringTag::Usage => Grade::Usage(1),
        }
    }

    /// Semiring sum. For security grades the result is public exactly when
    /// either operand is public.
    pub fn add(self, other: Grade) -> Result<Grade, TagMismatch> {
        match (self, other) {
            (Grade::Usage(a), Grade::Usage(b)) => Ok(Grade::Usage(a + b)),
            (Grade::SecPublic, Grade::SecPublic)
            | (Grade::SecPublic, Grade::SecPrivate)
            | (Grade::SecPrivate, Grade::SecPublic) => Ok(Grade::SecPublic),
            (Grade::SecPrivate, Grade::SecPrivate) => Ok(Grade::SecPrivate),
            (a, b) => Err(TagMismatch {
                left: a.tag(),
                right: b.tag(),
            }),
        }
    }

    /// Semiring product. For security grades `Private` annihilates: the
    /// result is private when either operand is. This is exactly the
    /// composed grade of nested boxes, e.g. flattening a public box of a
    /// private box yields a private box.
    pub fn mul(self, other: Grade) -> Result<Grade, TagMismatch> {
        match (self, other) {
            (Grade::Usage(a), Grade::Usage(b)) => Ok(Grade::Usage(a * b)),
            (Grade::SecPublic, Grade::SecPublic) => Ok(Grade::SecPublic),
            (Grade::SecPrivate, Grade::SecPublic)
            | (Grade::SecPublic, Grade::SecPrivate)
            | (Grade::SecPrivate, Grade::SecPrivate) => Ok(Grade::SecPrivate),
            (a, b) => Err(TagMismatch {
                left: a.tag(),
                right: b.tag(),
            }),
        }
    }

    /// The approximation preorder used by subsumption. Security grades are
    /// ordered by the reflexive closure of `Private ⊑ Public`; usage grades
    /// only approximate themselves.
    pub fn leq(self, other: Grade) -> Result<bool, TagMismatch> {
        match (self, other) {
            (Grade::Usage(a), Grade::Usage(b)) => Ok(a == b),
            (Grade::SecPrivate, _sec @ (Grade::SecPublic | Grade::SecPrivate)) => Ok(true),
            (Grade::SecPublic, Grade::SecPublic) => Ok(true),
            (Grade::SecPublic, Grade::SecPrivate) => Ok(false),
            (a, b) => Err(TagMismatch {
                left: a.tag(),
                right: b.tag(),
            }),
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::SecPublic => f.write_str("Public"),
            Grade::SecPrivate => f.write_str("Private"),
            Grade::Usage(n) => write!(f, "{}", n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Grade::*;

    const SEC: [Grade; 2] = [SecPrivate, SecPublic];

    fn usages() -> Vec<Grade> {
        (0..=16).map(Usage).collect()
    }

    #[test]
    fn add_examples() {
        assert_eq!(SecPrivate.add(SecPublic), Ok(SecPublic));
        assert_eq!(SecPublic.add(SecPublic), Ok(SecPublic));
        assert_eq!(Usage(2).add(Usage(3)), Ok(Usage(5)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(SecPublic.mul(SecPrivate), Ok(SecPrivate));
        assert_eq!(SecPublic.mul(SecPublic), Ok(SecPublic));
        assert_eq!(Usage(2).mul(Usage(3)), Ok(Usage(6)));
    }

    #[test]
    fn leq_examples() {
        assert_eq!(SecPrivate.leq(SecPublic), Ok(true));
        assert_eq!(SecPublic.leq(SecPrivate), Ok(false));
        assert_eq!(Usage(2).leq(Usage(2)), Ok(true));
        assert_eq!(Usage(1).leq(Usage(2)), Ok(false));
    }

    #[test]
    fn mixed_tags_are_rejected() {
        let err = TagMismatch {
            left: SemiringTag::Security,
            right: SemiringTag::Usage,
        };
        assert_eq!(SecPublic.add(Usage(1)), Err(err));
        assert_eq!(SecPublic.mul(Usage(1)), Err(err));
        assert_eq!(SecPublic.leq(Usage(1)), Err(err));
    }

    #[test]
    fn units_match_tags() {
        assert_eq!(Grade::zero(SemiringTag::Security), SecPrivate);
        assert_eq!(Grade::one(SemiringTag::Security), SecPublic);
        assert_eq!(Grade::zero(SemiringTag::Usage), Usage(0));
        assert_eq!(Grade::one(SemiringTag::Usage), Usage(1));
    }

    // Checks all semiring axioms on one carrier: associativity and
    // commutativity of +, units, two-sided distributivity, annihilation.
    fn check_axioms(carrier: &[Grade], tag: SemiringTag) {
        let zero = Grade::zero(tag);
        let one = Grade::one(tag);
        for &a in carrier {
            assert_eq!(a.add(zero).unwrap(), a);
            assert_eq!(zero.add(a).unwrap(), a);
            assert_eq!(a.mul(one).unwrap(), a);
            assert_eq!(one.mul(a).unwrap(), a);
            assert_eq!(a.mul(zero).unwrap(), zero);
            assert_eq!(zero.mul(a).unwrap(), zero);
            for &b in carrier {
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                for &c in carrier {
                    assert_eq!(
                        a.add(b).unwrap().add(c).unwrap(),
                        a.add(b.add(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(b).unwrap().mul(c).unwrap(),
                        a.mul(b.mul(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(b.add(c).unwrap()).unwrap(),
                        a.mul(b).unwrap().add(a.mul(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        b.add(c).unwrap().mul(a).unwrap(),
                        b.mul(a).unwrap().add(c.mul(a).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    fn check_preorder(carrier: &[Grade]) {
        for &a in carrier {
            assert!(a.leq(a).unwrap());
            for &b in carrier {
                for &c in carrier {
                    if a.leq(b).unwrap() && b.leq(c).unwrap() {
                        assert!(a.leq(c).unwrap());
                    }
                }
            }
        }
    }

    fn check_monotone(carrier: &[Grade]) {
        for &a in carrier {
            for &b in carrier {
                if !a.leq(b).unwrap() {
                    continue;
                }
                for &c in carrier {
                    assert!(a.add(c).unwrap().leq(b.add(c).unwrap()).unwrap());
                    assert!(a.mul(c).unwrap().leq(b.mul(c).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn security_axioms_exhaustive() {
        check_axioms(&SEC, SemiringTag::Security);
        check_preorder(&SEC);
        check_monotone(&SEC);
    }

    #[test]
    fn usage_axioms_sampled() {
        let us = usages();
        check_axioms(&us, SemiringTag::Usage);
        check_preorder(&us);
        check_monotone(&us);
    }
}
