//! Monte Carlo over Gaussian-distributed addressed-flip angles in repeated
//! GHZ pumping. Correlations with the flipped ion decay; the others do not.

use ionsim::noise::{bootstrap_mean_ci, repeated_pumping_mc, McConfig, NoiseModel, SpreadConvention};

fn main() -> ionsim::Result<()> {
    let config = McConfig { trajectories: 2000, ..McConfig::default() };
    let model = NoiseModel::from_spread(0.3 * std::f64::consts::FRAC_PI_2, SpreadConvention::StdDev)?;
    let record = repeated_pumping_mc(&config, &model)?;
    println!("{:>4} {}", "step", record.labels.iter().map(|l| format!("{l:>14}")).collect::<String>());
    for (step, (mean, err)) in record.mean.iter().zip(&record.stderr).enumerate() {
        let cells: String = mean.iter().zip(err).map(|(m, e)| format!("{:>14}", format!("{m:.3}±{e:.3}"))).collect();
        println!("{step:>4} {cells}");
    }
    let last: Vec<f64> = record.per_trajectory.iter().map(|t| t[config.steps][0]).collect();
    let (lo, hi) = bootstrap_mean_ci(&last, 1000, 0.95, 1)?;
    println!("final <A> 95% bootstrap interval: [{lo:.4}, {hi:.4}]");
    Ok(())
}
