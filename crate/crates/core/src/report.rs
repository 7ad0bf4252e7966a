//! Key-value run reports.
//!
//! One `key=value` pair per line, fields always in the same order, so two
//! runs over the same input differ only in `elapsed_ms`.

use std::fmt::Write as _;
use std::time::Duration;

use num::BigUint;
use sha2::{Digest, Sha256};

use crate::cut::{CutResult, Lambda, Objective};
use crate::dendro::{Partition, WeightScheme};
use crate::rational::Rational;
use crate::tree::{EdgeId, RootedTree};

/// Significant digits of the decimal average printed next to the exact one.
pub const DECIMAL_DIGITS: usize = 12;

pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub parent: String,
    pub child: String,
    pub weight: Rational,
}

impl EdgeRecord {
    pub fn new(tree: &RootedTree, e: EdgeId) -> Self {
        EdgeRecord {
            parent: tree.label(tree.tail(e)).to_string(),
            child: tree.label(e.head()).to_string(),
            weight: tree.weight(e).clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub edge: EdgeRecord,
    pub lambda: Lambda,
    pub alpha0: Rational,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: &'static str,
    pub input_digest: String,
    pub objective: Objective,
    pub weight_scheme: Option<WeightScheme>,
    pub cuts_enumerated: Option<BigUint>,
    pub cut: Vec<EdgeRecord>,
    pub total: Rational,
    pub average: Rational,
    pub size: usize,
    pub contraction_count: usize,
    pub communities: Vec<Vec<String>>,
    pub trace: Option<Vec<TraceRecord>>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn from_cut(
        command: &'static str,
        input_digest: String,
        objective: Objective,
        tree: &RootedTree,
        result: &CutResult,
    ) -> Self {
        RunReport {
            command,
            input_digest,
            objective,
            weight_scheme: None,
            cuts_enumerated: None,
            cut: result.cut.iter().map(|&e| EdgeRecord::new(tree, e)).collect(),
            total: result.total.clone(),
            average: result.average.clone(),
            size: result.size,
            contraction_count: result.contractions.len(),
            communities: Vec::new(),
            trace: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_trace(mut self, tree: &RootedTree, result: &CutResult) -> Self {
        self.trace = Some(
            result
                .contractions
                .iter()
                .map(|s| TraceRecord {
                    edge: EdgeRecord::new(tree, s.edge),
                    lambda: s.lambda.clone(),
                    alpha0: s.alpha0_after.clone(),
                })
                .collect(),
        );
        self
    }

    pub fn with_partition(mut self, tree: &RootedTree, partition: &Partition, scheme: WeightScheme) -> Self {
        self.weight_scheme = Some(scheme);
        self.communities = partition
            .labels(tree)
            .into_iter()
            .map(|c| c.into_iter().map(str::to_string).collect())
            .collect();
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("command", &self.command);
        kv("input_digest", &self.input_digest);
        kv("objective", &self.objective);
        if let Some(scheme) = self.weight_scheme {
            kv("weight_scheme", &scheme);
        }
        if let Some(n) = &self.cuts_enumerated {
            kv("cuts_enumerated", n);
        }
        kv("size", &self.size);
        kv("total", &self.total);
        kv("average", &self.average);
        kv("average_decimal", &self.average.to_sig_digits(DECIMAL_DIGITS));
        kv("contraction_count", &self.contraction_count);
        for e in &self.cut {
            kv("cut_edge", &format_args!("{}\t{}\t{}", e.parent, e.child, e.weight));
        }
        for c in &self.communities {
            kv("community", &c.join(" "));
        }
        if let Some(trace) = &self.trace {
            for (i, t) in trace.iter().enumerate() {
                kv(
                    "contraction",
                    &format_args!(
                        "{}\t{}\t{}\tlambda={}\talpha0={}",
                        i + 1,
                        t.edge.parent,
                        t.edge.child,
                        t.lambda,
                        t.alpha0
                    ),
                );
            }
        }
        kv("elapsed_ms", &format_args!("{:.3}", self.elapsed.as_secs_f64() * 1e3));
        out
    }
}

/// Splits report text into `(key, value)` pairs in order.
pub fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// First value for `key` in a parsed report.
pub fn report_field<'a>(fields: &'a [(String, String)], key: &str) -> Option<&'a str> {
    fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::optimal_average_cut;
    use crate::tree::build_tree;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            input_digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn rendering_reproduces_cut_value() {
        let t = build_tree(&[("r", "a", "0.1"), ("r", "b", "1/3")]).unwrap();
        let res = optimal_average_cut(&t, Objective::Maximize);
        let report = RunReport::from_cut("cut", input_digest(b"x"), Objective::Maximize, &t, &res).with_trace(&t, &res);
        let fields = parse_report(&report.render());
        assert_eq!(report_field(&fields, "average"), Some("13/60"));
        assert_eq!(report_field(&fields, "average_decimal"), Some("0.216666666667"));
        let sum: Rational = fields
            .iter()
            .filter(|(k, _)| k == "cut_edge")
            .map(|(_, v)| v.rsplit('\t').next().unwrap().parse::<Rational>().unwrap())
            .sum();
        assert_eq!(sum.div_count(2).to_string(), "13/60");
        let keys: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys.first(), Some(&"command"));
        assert_eq!(keys.last(), Some(&"elapsed_ms"));
    }
}
