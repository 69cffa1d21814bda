//! Two-chain qubit register layout.
//!
//! Sites are numbered `1..=n` along each chain. The down chain occupies the
//! linear qubit indices `1..=n` and the up chain `n+1..=2n`, so that each
//! chain is contiguous and nearest neighbours along a chain are adjacent in
//! the fermionic ordering.
//!
//! Linear qubit `q` lives on bit `q - 1` of a computational basis index. A set
//! bit means the qubit is excited.

use std::fmt;

use crate::error::{Error, Result};

/// Largest register handled by full-space (dense or sparse) paths.
pub const MAX_FULL_QUBITS: usize = 24;
/// Largest register handled by sector-restricted paths.
pub const MAX_SECTOR_QUBITS: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chain {
    Down,
    Up,
}

impl Chain {
    pub const BOTH: [Chain; 2] = [Chain::Down, Chain::Up];

    pub fn other(self) -> Chain {
        match self {
            Chain::Down => Chain::Up,
            Chain::Up => Chain::Down,
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chain::Down => write!(f, "down"),
            Chain::Up => write!(f, "up"),
        }
    }
}

/// A qubit position `(site, chain)` on the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderIndex {
    pub site: usize,
    pub chain: Chain,
}

impl LadderIndex {
    pub fn new(site: usize, chain: Chain) -> Self {
        LadderIndex { site, chain }
    }

    pub fn up(site: usize) -> Self {
        LadderIndex::new(site, Chain::Up)
    }

    pub fn down(site: usize) -> Self {
        LadderIndex::new(site, Chain::Down)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.site == 0 || self.site > n {
            return Err(Error::domain(format!(
                "site {} outside 1..={n} ({} chain)",
                self.site, self.chain
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LadderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.chain {
            Chain::Down => 'd',
            Chain::Up => 'u',
        };
        write!(f, "{}{}", self.site, c)
    }
}

/// Maps `(j, down) -> j` and `(j, up) -> j + n`.
pub fn linearize(idx: LadderIndex, n: usize) -> Result<usize> {
    idx.validate(n)?;
    Ok(match idx.chain {
        Chain::Down => idx.site,
        Chain::Up => idx.site + n,
    })
}

/// Inverse of [`linearize`].
pub fn delinearize(q: usize, n: usize) -> Result<LadderIndex> {
    if q == 0 || q > 2 * n {
        return Err(Error::domain(format!("qubit index {q} outside 1..={}", 2 * n)));
    }
    Ok(if q <= n {
        LadderIndex::down(q)
    } else {
        LadderIndex::up(q - n)
    })
}

/// Bit mask covering the down chain (low `n` bits).
#[inline]
pub(crate) fn down_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// Excitation counts `(n_up, n_down)` of a basis state.
#[inline]
pub fn chain_counts(state: u64, n: usize) -> (usize, usize) {
    let down = (state & down_mask(n)).count_ones() as usize;
    let up = (state >> n).count_ones() as usize;
    (up, down)
}

/// Exchanges the two chains of a basis state.
#[inline]
pub(crate) fn swap_chains(state: u64, n: usize) -> u64 {
    let m = down_mask(n);
    ((state & m) << n) | ((state >> n) & m)
}

pub(crate) fn check_chain_length(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("chain length n must be at least 1"));
    }
    Ok(())
}
