//! Set partitions of `[j] = {1..j}`, enumerated as restricted growth
//! strings, with the Bell-number guard the cumulant formulas rely on.

use crate::{Error, Result};

/// Partition of `[j]` into disjoint nonempty blocks covering `{1..j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<u32> {
        self.blocks.iter().map(|b| b.len() as u32).collect()
    }
}

/// Enumeration ceiling: Bell(14) is the desk-scale limit.
pub const MAX_PARTITION_SIZE: usize = 14;

/// Bell numbers via the Bell triangle.
pub fn bell(j: usize) -> u128 {
    if j == 0 {
        return 1;
    }
    let mut row = vec![1u128];
    for _ in 1..j {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

/// Iterator over all partitions of `[j]`, `1 <= j <= 14`.
pub fn partitions(j: usize) -> Result<PartitionIter> {
    if j == 0 || j > MAX_PARTITION_SIZE {
        return Err(Error::invalid(format!(
            "partition enumeration supports 1 <= j <= {MAX_PARTITION_SIZE}, got {j}"
        )));
    }
    Ok(PartitionIter {
        rgs: vec![0; j],
        done: false,
    })
}

/// Restricted-growth-string enumerator. Each yielded string `a` satisfies
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`.
pub struct PartitionIter {
    rgs: Vec<u8>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = rgs_to_partition(&self.rgs);
        // advance to the next restricted growth string
        let j = self.rgs.len();
        let mut i = j;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let cap = 1 + self.rgs[..i].iter().copied().max().unwrap();
            if self.rgs[i] < cap {
                self.rgs[i] += 1;
                for v in &mut self.rgs[i + 1..] {
                    *v = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

fn rgs_to_partition(rgs: &[u8]) -> Partition {
    let nb = 1 + rgs.iter().copied().max().unwrap_or(0) as usize;
    let mut blocks = vec![Vec::new(); nb];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b as usize].push(i + 1);
    }
    Partition { blocks }
}
