//! Benchmark CSV assembly: exact rational ratios, fixed-point rendering
//! and the per-algorithm max-ratio summary.

use num_rational::Ratio;

/// One measurement: a solver run on one instance file.
pub struct BenchRow {
    pub instance_id: String,
    pub n: usize,
    pub algorithm: &'static str,
    pub total: u64,
    pub optimum: Option<u64>,
    pub wall_ms: u128,
}

impl BenchRow {
    fn ratio(&self) -> Option<Ratio<u128>> {
        self.optimum.and_then(|opt| exact_ratio(self.total, opt))
    }
}

/// total/optimum as an exact rational. A zero optimum only happens when
/// every completion time is zero, in which case the solver total is zero
/// as well and the ratio is one; any other division by zero yields `None`
/// (and an empty CSV cell) rather than a made-up number.
pub fn exact_ratio(total: u64, optimum: u64) -> Option<Ratio<u128>> {
    match (total, optimum) {
        (0, 0) => Some(Ratio::from_integer(1)),
        (_, 0) => None,
        (t, o) => Some(Ratio::new(u128::from(t), u128::from(o))),
    }
}

/// Renders a non-negative rational with exactly six decimal places,
/// rounding half away from zero. All arithmetic stays in integers.
pub fn render_ratio(ratio: Ratio<u128>) -> String {
    const SCALE: u128 = 1_000_000;
    let scaled = ratio.numer() * SCALE;
    let den = *ratio.denom();
    let mut q = scaled / den;
    if (scaled % den) * 2 >= den {
        q += 1;
    }
    format!("{}.{:06}", q / SCALE, q % SCALE)
}

pub const CSV_HEADER: &str = "instance_id,n,algorithm,total,optimum,ratio,wall_ms";

/// Formats the full CSV: header, data rows sorted by (instance id,
/// algorithm), then one `MAX_RATIO` summary row per algorithm that has at
/// least one ratio. With no oracle there are no ratios and no summary.
pub fn emit_csv(mut rows: Vec<BenchRow>) -> String {
    rows.sort_by(|a, b| {
        (a.instance_id.as_str(), a.algorithm).cmp(&(b.instance_id.as_str(), b.algorithm))
    });
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        let optimum = row.optimum.map(|o| o.to_string()).unwrap_or_default();
        let ratio = row.ratio().map(render_ratio).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.instance_id, row.n, row.algorithm, row.total, optimum, ratio, row.wall_ms
        ));
    }
    let mut worst: Vec<(&'static str, Ratio<u128>)> = Vec::new();
    for row in &rows {
        let Some(ratio) = row.ratio() else { continue };
        match worst.iter_mut().find(|(alg, _)| *alg == row.algorithm) {
            Some((_, max)) => {
                if ratio > *max {
                    *max = ratio;
                }
            }
            None => worst.push((row.algorithm, ratio)),
        }
    }
    worst.sort_by_key(|(alg, _)| *alg);
    for (alg, max) in worst {
        out.push_str(&format!("MAX_RATIO,,{},,,{},\n", alg, render_ratio(max)));
    }
    out
}
