//! `compare-recall`: mean per-class recall of two confusion-matrix files,
//! side by side.

use rebalance_core::experiment::compare_recall;

use super::merger_for;
use crate::args::CompareRecallArgs;
use crate::error::CliResult;
use crate::matrix_io::load_matrix;

pub fn run(args: CompareRecallArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "compare-recall")?;
    let baseline_path = merger.required("baseline", args.baseline)?;
    let treated_path = merger.required("treated", args.treated)?;
    merger.finish()?;

    let baseline = load_matrix(&baseline_path)?;
    let treated = load_matrix(&treated_path)?;
    let comparison = compare_recall(&baseline, &treated)?;

    println!("baseline macro recall: {:.6}", comparison.baseline);
    println!("treated macro recall:  {:.6}", comparison.treated);
    println!("delta:                 {:+.6}", comparison.delta);
    Ok(())
}
