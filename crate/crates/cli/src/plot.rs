//! gnuplot data and scripts for the root scatter and trajectory figures.

use std::fmt::Write as _;

use negdim_core::bigfloat::decimal;
use negdim_core::roots::{RootLabel, RootSet};
use rug::Rational;

/// Roots grouped by label into gnuplot index blocks, in label order.
pub fn roots_data(rs: &RootSet) -> String {
    let mut out = String::new();
    for (i, label) in labels(rs).iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {label}");
        if let RootLabel::StableZero(z) = label {
            if rs.stable.contains(&(*z as i64)) {
                let _ = writeln!(out, "{z} 0");
            }
        }
        for r in rs.roots.iter().filter(|r| r.label == *label) {
            let _ = writeln!(out, "{} {}", decimal(&r.value.re, 20), decimal(&r.value.im, 20));
        }
    }
    out
}

fn labels(rs: &RootSet) -> Vec<RootLabel> {
    let mut ls: Vec<RootLabel> = rs.roots.iter().map(|r| r.label).collect();
    ls.extend(rs.stable.iter().map(|&z| RootLabel::StableZero(z as i32)));
    ls.sort();
    ls.dedup();
    ls
}

pub fn roots_script(rs: &RootSet, data: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set title 'Roots of E^({}) in the complex D plane'", rs.k);
    s.push_str("set xlabel 'Re D'\nset ylabel 'Im D'\nset grid\nset key outside right\n");
    let plots: Vec<String> = labels(rs)
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let style = match l {
                RootLabel::Bulk => "pt 7 ps 0.6",
                RootLabel::Cluster(_) => "pt 9 ps 1.2",
                RootLabel::StableZero(_) => "pt 5 ps 1.0",
            };
            format!("'{data}' index {i} using 1:2 with points {style} title '{l}'")
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

pub fn hill_script(data: &str, levels: usize, g: &Rational) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    let _ = writeln!(s, "set title 'Level trajectories, g = {g}'");
    s.push_str("set xlabel 'effective dimension'\nset ylabel 'E'\nset grid\nset key outside right\n");
    let _ = writeln!(
        s,
        "plot for [n=0:{}] '{data}' using 1:($2==n && $4==0 ? $3 : 1/0) with lines lw 2 title sprintf('n = %d', n), \\\n     \
         for [n=0:{}] '{data}' using 1:($2==n && $4!=0 ? $3 : 1/0) with points pt 7 ps 0.4 lc rgb 'gray' notitle",
        levels - 1,
        levels - 1
    );
    s
}
