//! Stage arithmetic and path classes for the multipath construction.
//!
//! All of this lives in the canonical frame where the source is
//! `(0, 0...0)` and the destination is `w = (l_w, z_w)`. Hop `t` leaves
//! level `t mod m` and may only change bit `t mod m` of the place.
//!
//! The route length is `m + L` where `L` is the level offset of `w` taken
//! in `h..m + h` (see [`level_offset`]): the first `L` steps place the
//! route in its classes, the remaining `m` steps cycle once more to fix
//! every bit to `z_w`.

use core::fmt;

use super::RoutingError;

/// Stage label of one hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    One,
    Two,
    Three,
    Four,
    Five,
    Six,
    Seven,
    /// The shortcut route after its stage 2, fixing the bits preceding
    /// `l_w` and stopping at `w` a full cycle early.
    Shortcut,
    /// Plain bit-fixing route, not part of a multipath set.
    Unipath,
}

impl Stage {
    pub const NUMBERED: [Stage; 7] =
        [Stage::One, Stage::Two, Stage::Three, Stage::Four, Stage::Five, Stage::Six, Stage::Seven];

    pub fn number(self) -> Option<u8> {
        Stage::NUMBERED.iter().position(|&s| s == self).map(|i| i as u8 + 1)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::One => "1",
            Stage::Two => "2",
            Stage::Three => "3",
            Stage::Four => "4",
            Stage::Five => "5",
            Stage::Six => "6",
            Stage::Seven => "7",
            Stage::Shortcut => "shortcut",
            Stage::Unipath => "unipath",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Level offset of the destination, `l_w` when `l_w >= h` and `l_w + m`
/// otherwise. Below `h` the lowest `h` bits could not all be revisited
/// before reaching `w`.
pub fn level_offset(m: u32, h: u32, l_w: u32) -> u32 {
    if l_w >= h {
        l_w
    } else {
        l_w + m
    }
}

/// Half-open step intervals of the seven stages for offset `offset`.
/// Intervals are disjoint and cover `0..m + offset`; overlapping ranges
/// are resolved in favour of stage 1 over stage 3 and stage 7 over
/// stage 5 (they set the same bits to the same values in the overlap).
pub fn stage_bounds(m: u32, h: u32, offset: u32) -> [(Stage, u32, u32); 7] {
    let end = m + offset;
    let clamp = |a: u32, b: u32| (a, b.max(a));
    let s1 = clamp(0, h);
    let s2 = clamp(h, offset.saturating_sub(h));
    let s3 = clamp(h.max(offset - h), offset.min(m));
    let s4 = clamp(offset, m);
    let s5 = clamp(m, (m + h).min(end - h));
    let s6 = clamp(m + h, end - h);
    let s7 = clamp(end - h, end);
    [
        (Stage::One, s1.0, s1.1),
        (Stage::Two, s2.0, s2.1),
        (Stage::Three, s3.0, s3.1),
        (Stage::Four, s4.0, s4.1),
        (Stage::Five, s5.0, s5.1),
        (Stage::Six, s6.0, s6.1),
        (Stage::Seven, s7.0, s7.1),
    ]
}

/// Stage containing step `t` for a destination at level `l_w`.
pub fn classify_stage(t: u32, m: u32, l_w: u32, h: u32) -> Result<Stage, RoutingError> {
    if h == 0 || h > m / 2 {
        return Err(RoutingError::Radius { h, m });
    }
    let offset = level_offset(m, h, l_w % m);
    stage_at(t, m, h, offset).ok_or(RoutingError::StepOutOfRange { t, len: m + offset })
}

pub(crate) fn stage_at(t: u32, m: u32, h: u32, offset: u32) -> Option<Stage> {
    stage_bounds(m, h, offset).iter().find(|&&(_, a, b)| a <= t && t < b).map(|&(s, _, _)| s)
}

/// Membership tests for the path classes of one path parameter `s`.
///
/// * `Q`: bits `h..L-h` equal those of the source place (all zero in the
///   canonical frame). Vacuous when `L < 2h`.
/// * `R_s`: the lowest `h` bits equal `s`.
/// * `S_s`: the `h` bits preceding index `l_w` (cyclically) equal
///   `s_tilde`, with `s_tilde_i = s_((i + l_w) mod h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassPredicates {
    pub m: u32,
    pub h: u32,
    pub l_w: u32,
    pub s: u32,
    pub s_tilde: u32,
}

impl ClassPredicates {
    pub fn new(m: u32, h: u32, l_w: u32, s: u32) -> Self {
        let mut s_tilde = 0;
        for i in 0..h {
            s_tilde |= ((s >> ((i + l_w) % h)) & 1) << i;
        }
        Self { m, h, l_w, s, s_tilde }
    }

    fn low_mask(&self) -> u32 {
        (1 << self.h) - 1
    }

    /// Bit index of position `i` (`0 <= i < h`) of the `S` window.
    pub fn window_index(&self, i: u32) -> u32 {
        (self.l_w + self.m - self.h + i) % self.m
    }

    /// Position of bit `index` inside the `S` window, if it is in it.
    pub fn window_position(&self, index: u32) -> Option<u32> {
        let start = (self.l_w + self.m - self.h) % self.m;
        let o = (index + self.m - start) % self.m;
        (o < self.h).then_some(o)
    }

    /// Value `S_s` prescribes for bit `index`, if `index` is in the window.
    pub fn window_bit(&self, index: u32) -> Option<bool> {
        self.window_position(index).map(|o| (self.s_tilde >> o) & 1 == 1)
    }

    pub fn in_q(&self, place: u32) -> bool {
        let offset = level_offset(self.m, self.h, self.l_w);
        (self.h..offset.saturating_sub(self.h)).all(|i| (place >> i) & 1 == 0)
    }

    pub fn in_r(&self, place: u32) -> bool {
        place & self.low_mask() == self.s
    }

    pub fn in_s(&self, place: u32) -> bool {
        (0..self.h).all(|i| (place >> self.window_index(i)) & 1 == (self.s_tilde >> i) & 1)
    }
}
