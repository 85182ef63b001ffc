//! Set-partition enumeration by restricted growth strings.

/// Visits every set partition of `k` labelled slots as a restricted growth
/// string `rgs` (`rgs[i]` is the block of slot `i`, blocks numbered in order
/// of first appearance). The callback also receives the block count.
pub fn for_each_set_partition<F: FnMut(&[usize], usize)>(k: usize, mut visit: F) {
    let mut rgs = vec![0usize; k];
    fn go<F: FnMut(&[usize], usize)>(rgs: &mut [usize], pos: usize, blocks: usize, visit: &mut F) {
        if pos == rgs.len() {
            visit(rgs, blocks);
            return;
        }
        for b in 0..=blocks {
            rgs[pos] = b;
            go(rgs, pos + 1, blocks.max(b + 1), visit);
        }
    }
    go(&mut rgs, 0, 0, &mut visit);
}

/// For slots labelled by mode index, sums `Π_blocks weight[mode(block)]` over
/// all set partitions whose blocks contain a single mode, grouped by block
/// count: the returned `w[b]` collects partitions with exactly `b` blocks.
pub fn homogeneous_partition_weights(slot_modes: &[usize], mode_weight: &[f64]) -> Vec<f64> {
    let k = slot_modes.len();
    let mut out = vec![0.0; k + 1];
    // block_modes[j] = mode of block j; partitions are built slot by slot so
    // each visited leaf is one distinct set partition.
    let mut block_modes: Vec<usize> = Vec::with_capacity(k);
    fn go(
        slots: &[usize],
        weight: &[f64],
        pos: usize,
        block_modes: &mut Vec<usize>,
        acc: f64,
        out: &mut [f64],
    ) {
        if acc == 0.0 {
            return;
        }
        if pos == slots.len() {
            out[block_modes.len()] += acc;
            return;
        }
        let m = slots[pos];
        for j in 0..block_modes.len() {
            if block_modes[j] == m {
                go(slots, weight, pos + 1, block_modes, acc, out);
            }
        }
        block_modes.push(m);
        go(slots, weight, pos + 1, block_modes, acc * weight[m], out);
        block_modes.pop();
    }
    go(slot_modes, mode_weight, 0, &mut block_modes, 1.0, &mut out);
    out
}
