//! Receiver side: every copy names the full list of channels the sender
//! used, so missing copies are visible.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageCopy<P> {
    pub channel: u32,
    pub payload: P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Any missing or disagreeing copy is reported.
    #[default]
    Detect,
    /// A strict majority of the expected copies wins.
    Correct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<P> {
    /// All expected copies arrived and agree.
    Accept(P),
    Detect,
    /// Majority vote over a damaged set.
    Correct(P),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolError {
    DuplicateChannel(u32),
    UnexpectedChannel(u32),
}

impl fmt::Display for ProtocolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolError::DuplicateChannel(c) => write!(f, "two copies claim channel {c}"),
            ProtocolError::UnexpectedChannel(c) => write!(f, "copy on channel {c}, which the sender did not use"),
        }
    }
}

impl core::error::Error for ProtocolError {}

/// Decides what to do with the copies that arrived.
///
/// The majority in [`DecodeMode::Correct`] is taken over the number of
/// expected copies, so a payload must be carried by more than half of the
/// channels the sender used.
pub fn receive_and_decide<P: Eq + Clone>(
    copies: &[MessageCopy<P>],
    expected: &[u32],
    mode: DecodeMode,
) -> Result<Decision<P>, ProtocolError> {
    let expected: BTreeSet<u32> = expected.iter().copied().collect();
    let mut seen = BTreeSet::new();
    for copy in copies {
        if !expected.contains(&copy.channel) {
            return Err(ProtocolError::UnexpectedChannel(copy.channel));
        }
        if !seen.insert(copy.channel) {
            return Err(ProtocolError::DuplicateChannel(copy.channel));
        }
    }
    let complete = seen.len() == expected.len();
    if let Some(first) = copies.first() {
        if complete && copies.iter().all(|c| c.payload == first.payload) {
            return Ok(Decision::Accept(first.payload.clone()));
        }
    }
    if mode == DecodeMode::Correct {
        let mut votes: Vec<(&P, usize)> = Vec::new();
        for copy in copies {
            match votes.iter_mut().find(|(p, _)| **p == copy.payload) {
                Some(v) => v.1 += 1,
                None => votes.push((&copy.payload, 1)),
            }
        }
        if let Some((p, _)) = votes.into_iter().find(|&(_, n)| 2 * n > expected.len()) {
            return Ok(Decision::Correct(p.clone()));
        }
    }
    Ok(Decision::Detect)
}
