//! Gnuplot scripts for emitted CSV files.

use std::fmt::Write;

pub struct PlotCurve {
    /// CSV file name, relative to the script's directory.
    pub file: String,
    pub title: String,
}

/// Script plotting concurrence against t′ for every curve, undefined points
/// left as gaps. Run it from the directory holding the CSVs.
pub fn gnuplot_script(title: &str, image: &str, curves: &[PlotCurve]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot {image}.gp");
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 1200,500\n");
    let _ = writeln!(s, "set output '{image}.png'");
    let _ = writeln!(s, "set title \"{title}\"");
    s.push_str("set xlabel \"t'\"\n");
    s.push_str("set ylabel 'concurrence'\n");
    s.push_str("set yrange [0:1.05]\n");
    s.push_str("set key outside right\n");
    let plots: Vec<String> = curves
        .iter()
        .map(|c| {
            format!(
                "'{}' every ::1 using 1:($4 == 1 ? $2 : NaN) with lines title '{}'",
                c.file, c.title
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
