//! Gnuplot scripts for the CSV outputs; run `gnuplot plot.gp` in the output directory.

use std::fmt::Write as _;

use crate::experiment::Outcome;

pub fn gnuplot_script(outcome: &Outcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel 't'");
    let _ = writeln!(s);
    let _ = writeln!(s, "set output 'norm.png'");
    let _ = writeln!(s, "set ylabel '||u||_2'");
    if outcome.fts.is_some() && outcome.config.amplitude == 0.0 {
        let _ = writeln!(s, "set logscale y");
    }
    if let Some(sched) = &outcome.schedule {
        for &t in &sched.t[1..sched.t.len() - 1] {
            let _ = writeln!(
                s,
                "set arrow from {t},graph 0 to {t},graph 1 nohead dashtype 2"
            );
        }
    }
    let _ = writeln!(s, "plot 'trace.csv' using 1:2 with lines");
    let _ = writeln!(s, "unset logscale y");
    let _ = writeln!(s);
    let _ = writeln!(s, "set output 'control.png'");
    let _ = writeln!(s, "set ylabel 'U(t)'");
    if outcome.trace.split {
        let _ = writeln!(s, "plot 'trace.csv' using 1:4 with lines, '' using 1:5 with lines, '' using 1:6 with lines");
    } else {
        let _ = writeln!(s, "plot 'trace.csv' using 1:4 with lines");
    }
    s
}
