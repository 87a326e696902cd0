use crate::scalar::C64;

/// Ordered list of shifts `σ_ℓ`, `ℓ = 1..m`. Duplicates are allowed and are
/// solved independently.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSet {
    shifts: Vec<C64>,
}

impl ShiftSet {
    /// `None` if `shifts` is empty.
    pub fn new(shifts: Vec<C64>) -> Option<Self> {
        (!shifts.is_empty()).then_some(Self { shifts })
    }

    pub fn single(sigma: C64) -> Self {
        Self { shifts: vec![sigma] }
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.shifts
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.shifts.iter()
    }

    /// First `m` shifts.
    pub fn truncated(&self, m: usize) -> Option<Self> {
        Self::new(self.shifts.iter().take(m).copied().collect())
    }
}

impl std::ops::Index<usize> for ShiftSet {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.shifts[i]
    }
}
