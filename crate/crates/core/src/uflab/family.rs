//! Families of subsets of a finite ground `{0, …, k-1}`, stored as a bitset
//! indexed by subset masks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground whose full power set is materialized.
pub const MAX_GROUND: usize = 27;

/// Bit patterns of `{Y : p ∈ Y}` within one 64-subset word, for `p < 6`.
const LOW_PRINCIPAL: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: usize,
    bits: Vec<u64>,
}

impl SetFamily {
    pub fn empty(ground: usize) -> Result<Self> {
        check_ground(ground)?;
        Ok(SetFamily {
            ground,
            bits: vec![0; words_for(ground)],
        })
    }

    pub fn from_members(ground: usize, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut f = SetFamily::empty(ground)?;
        for m in members {
            if ground < 32 && m >> ground != 0 {
                return Err(Error::Invalid(format!(
                    "subset mask {m:#b} is not inside a ground of {ground} points"
                )));
            }
            f.insert(m);
        }
        Ok(f)
    }

    /// `{Y : p ∈ Y}`.
    pub fn principal(ground: usize, p: usize) -> Result<Self> {
        check_ground(ground)?;
        if p >= ground {
            return Err(Error::Invalid(format!(
                "point {p} is outside a ground of {ground} points"
            )));
        }
        let mut bits = vec![0; words_for(ground)];
        for (w, word) in bits.iter_mut().enumerate() {
            *word = principal_word(p, w);
        }
        let mut f = SetFamily { ground, bits };
        f.trim();
        Ok(f)
    }

    /// Builds the family `{Y : keep(Y)}` by enumerating every subset.
    pub fn from_predicate(ground: usize, mut keep: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut f = SetFamily::empty(ground)?;
        let total = 1u64 << ground;
        for (w, word) in f.bits.iter_mut().enumerate() {
            let base = (w as u64) << 6;
            let mut acc = 0u64;
            for b in 0..64.min(total - base) {
                if keep((base + b) as u32) {
                    acc |= 1 << b;
                }
            }
            *word = acc;
        }
        Ok(f)
    }

    /// Sets the members `(hi << width) | y` for which `keep(y)` holds.
    pub(crate) fn fill_block(&mut self, hi: u32, width: usize, mut keep: impl FnMut(u32) -> bool) {
        let base = (hi as u64) << width;
        for y in 0u32..1 << width {
            if keep(y) {
                let z = base | y as u64;
                self.bits[(z >> 6) as usize] |= 1 << (z & 63);
            }
        }
    }

    fn trim(&mut self) {
        if self.ground < 6 {
            self.bits[0] &= (1u64 << (1 << self.ground)) - 1;
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Mask of the whole ground.
    pub fn full_mask(&self) -> u32 {
        full_mask(self.ground)
    }

    pub fn contains(&self, y: u32) -> bool {
        self.bits[(y >> 6) as usize] >> (y & 63) & 1 == 1
    }

    pub fn insert(&mut self, y: u32) {
        self.bits[(y >> 6) as usize] |= 1 << (y & 63);
    }

    pub fn len(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    /// Member masks in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(((w as u32) << 6) | b)
            })
        })
    }

    /// The point `p` when the family is `{Y : p ∈ Y}`.
    pub fn principal_point(&self) -> Option<usize> {
        let kernel = self
            .members()
            .try_fold(self.full_mask(), |acc, m| if acc == 0 { None } else { Some(acc & m) })?;
        if self.is_empty() || kernel.count_ones() != 1 {
            return None;
        }
        let p = kernel.trailing_zeros() as usize;
        self.bits
            .iter()
            .enumerate()
            .all(|(w, &word)| word == principal_word(p, w) & self.word_mask())
            .then_some(p)
    }

    fn word_mask(&self) -> u64 {
        if self.ground < 6 {
            (1u64 << (1 << self.ground)) - 1
        } else {
            u64::MAX
        }
    }

    /// Members as sorted point lists, in increasing mask order.
    pub fn member_lists(&self) -> Vec<Vec<usize>> {
        self.members().map(points).collect()
    }
}

fn principal_word(p: usize, w: usize) -> u64 {
    if p < 6 {
        LOW_PRINCIPAL[p]
    } else if w >> (p - 6) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn words_for(ground: usize) -> usize {
    (1usize << ground).div_ceil(64)
}

fn check_ground(ground: usize) -> Result<()> {
    if ground > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "a ground of {ground} points exceeds the bound of {MAX_GROUND}"
        )));
    }
    Ok(())
}

pub(crate) fn full_mask(ground: usize) -> u32 {
    if ground >= 32 {
        u32::MAX
    } else {
        (1u32 << ground) - 1
    }
}

/// Points of a subset mask, ascending.
pub fn points(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(points: &[usize]) -> u32 {
    points.iter().fold(0, |acc, p| acc | 1 << p)
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ground <= 6 {
            f.debug_struct("SetFamily")
                .field("ground", &self.ground)
                .field("members", &self.member_lists())
                .finish()
        } else {
            f.debug_struct("SetFamily")
                .field("ground", &self.ground)
                .field("len", &self.len())
                .finish()
        }
    }
}

/// JSON form: the ground size and the members as sorted point lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub ground: usize,
    pub family: Vec<Vec<usize>>,
}

/// Largest ground serialized member by member.
pub const MAX_SERIALIZED_GROUND: usize = 12;

impl TryFrom<&SetFamily> for FamilyRecord {
    type Error = Error;

    fn try_from(f: &SetFamily) -> Result<Self> {
        if f.ground > MAX_SERIALIZED_GROUND {
            return Err(Error::TooLarge(format!(
                "listing a family over {} points",
                f.ground
            )));
        }
        Ok(FamilyRecord {
            ground: f.ground,
            family: f.member_lists(),
        })
    }
}

impl TryFrom<FamilyRecord> for SetFamily {
    type Error = Error;

    fn try_from(r: FamilyRecord) -> Result<Self> {
        let mut masks = Vec::with_capacity(r.family.len());
        for m in &r.family {
            if let Some(p) = m.iter().find(|p| **p >= r.ground) {
                return Err(Error::Invalid(format!(
                    "point {p} is outside a ground of {} points",
                    r.ground
                )));
            }
            masks.push(mask_of(m));
        }
        SetFamily::from_members(r.ground, masks)
    }
}
