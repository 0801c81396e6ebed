//! Approximate subset-sum sketches and the merges that build them.

use dense_approx::oracle::exact_subset_sums;
use dense_approx::sumset_approx::{dc_interval, dc_interval_capped, merge_additive};
use dense_approx::{ApproxSet, IntegerMultiset, Ratio64};

fn main() -> dense_approx::Result<()> {
    let values: Vec<u64> = (0..64).map(|i| 1000 + 13 * i).collect();
    let sums = exact_subset_sums(&IntegerMultiset::new(values.clone())?, None)?;

    // a sketch of all subset sums, within a 1/8 multiplicative envelope
    let sketch = dc_interval(&values, Ratio64::new(1, 8))?;
    let q = sketch.quality();
    println!(
        "exact table has {} sums, sketch keeps {} elements (delta {}, additive slack {})",
        sums.len(),
        sketch.len(),
        q.delta,
        q.big_delta
    );
    let covered = sums.iter().all(|&s| sketch.has_witness(s));
    println!("every exact sum is witnessed: {covered}");

    // capping the build keeps only the prefix below the cap, and the work
    // shrinks with it
    let low = dc_interval_capped(&values, Ratio64::new(1, 8), Some(4000))?;
    println!("capped at 4000: {} elements, largest {}", low.len(), low.max_element());

    // merging two exact halves by hand under an explicit additive budget
    let a = ApproxSet::exact(vec![0, 40, 41, 81], 2, None)?;
    let b = ApproxSet::exact(vec![0, 43, 44, 87], 2, None)?;
    let merged = merge_additive(&a, &b, 40, 4, 168, 3, Ratio64::new(1, 20))?;
    println!(
        "merged halves: {:?} (certifies sums up to {})",
        merged.elements(),
        merged.quality().cap.unwrap_or(u64::MAX)
    );
    Ok(())
}
