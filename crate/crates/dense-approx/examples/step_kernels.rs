//! The small kernels the solvers are built from.

use dense_approx::convolution::{
    maxplus_merge, minplus_windowed, smawk_uniform_merge, sumset_1d, UniformFunction, INF,
};
use dense_approx::StepFunction;

fn main() -> dense_approx::Result<()> {
    // two profit schedules, combined into "best total for weight x"
    let f = StepFunction::from_steps(vec![(2, 5), (5, 9), (9, 14)])?;
    let g = StepFunction::from_steps(vec![(1, 3), (6, 11)])?;
    let merged = maxplus_merge(&f, &g);
    for x in [0, 3, 8, 15] {
        println!("weight {x:>2}: best value {}", merged.eval(x));
    }

    // uniform schedules (equal-profit items) merge through matrix search
    let u = UniformFunction::from_weights(4, vec![3, 5, 9])?;
    let v = UniformFunction::from_weights(2, vec![2, 4])?;
    let env = smawk_uniform_merge(&[u, v], &[2], 40)?;
    println!("uniform merge: {} steps, top value {}", env.complexity(), env.max_value());

    // (min,+) over cost arrays, INF marking unreachable cells; the window
    // bounds how far the split indices may drift apart
    let a = vec![0, 7, INF, 12];
    let b = vec![0, 3, 5];
    let c: Vec<String> = minplus_windowed(&a, &b, Some(1))
        .into_iter()
        .map(|v| if v >= INF { "inf".into() } else { v.to_string() })
        .collect();
    println!("windowed min-plus: [{}]", c.join(", "));

    // plain integer sumsets back all of the above
    println!("sumset: {:?}", sumset_1d(&[0, 3, 7], &[0, 2, 9], None)?);
    Ok(())
}
