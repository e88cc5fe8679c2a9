//! From an observed success probability to exclusion statements and a
//! certified entanglement depth.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{all_partition_bounds, depth_table_from, p_ent, partition_bound, sep_bound};
use crate::error::{check_unit, Error, Result};
use crate::partition::{check_cap, PartitionSpec};

/// Slack allowed above the entangled bound before an observation is rejected.
pub const CONSISTENCY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedPartition {
    pub partition: PartitionSpec,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertVerdict {
    pub n: usize,
    pub omega: f64,
    pub observed_ps: f64,
    /// Ordered as [`crate::partition::integer_partitions`].
    pub excluded_partitions: Vec<ExcludedPartition>,
    /// Some group of at least this many parties must be entangled.
    pub depth_lower_bound: usize,
    pub gme: bool,
}

/// Certification with an optional margin subtracted from the observation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Certifier {
    margin: f64,
}

impl Certifier {
    pub fn new(margin: f64) -> Result<Self> {
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::OutOfRange {
                name: "margin",
                value: margin,
                range: "[0, inf)".into(),
            });
        }
        Ok(Self { margin })
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn certify(&self, n: usize, omega: f64, observed_ps: f64) -> Result<CertVerdict> {
        if n < 2 {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                range: "[2, inf)".into(),
            });
        }
        check_cap(n)?;
        check_unit("omega", omega)?;
        check_unit("observed_ps", observed_ps)?;
        let bound = p_ent(omega, n)?;
        if observed_ps > bound + CONSISTENCY_SLACK {
            return Err(Error::InconsistentObservation {
                n,
                omega,
                observed: observed_ps,
                bound,
            });
        }

        let effective = observed_ps - self.margin;
        let bounds = all_partition_bounds(omega, n)?;
        let table = depth_table_from(&bounds, n);
        let depth_lower_bound = table
            .iter()
            .find(|(_, &b)| effective <= b)
            .map_or(n, |(&d, _)| d);
        let excluded_partitions = bounds
            .into_iter()
            .filter(|(_, b)| *b < effective)
            .map(|(partition, bound)| ExcludedPartition { partition, bound })
            .collect();
        Ok(CertVerdict {
            n,
            omega,
            observed_ps,
            excluded_partitions,
            depth_lower_bound,
            gme: depth_lower_bound == n,
        })
    }
}

/// [`Certifier::certify`] with zero margin.
pub fn certify(n: usize, omega: f64, observed_ps: f64) -> Result<CertVerdict> {
    Certifier::default().certify(n, omega, observed_ps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "partition", rename_all = "lowercase")]
pub enum CurveKind {
    Ent,
    Partition(PartitionSpec),
    Sep,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub kind: CurveKind,
    pub values: Vec<f64>,
}

impl BoundCurve {
    /// Column name: `p_ent`, `p_sep` or `p_{1|3}`.
    pub fn column(&self) -> String {
        match &self.kind {
            CurveKind::Ent => "p_ent".into(),
            CurveKind::Sep => "p_sep".into(),
            CurveKind::Partition(p) => format!("p_{{{p}}}"),
        }
    }
}

/// The entangled curve, one curve per distinct intermediate partition (in the
/// given order), and the fully separable curve, sampled on `omega_grid`.
pub fn sweep(n: usize, omega_grid: &[f64], partitions: &[PartitionSpec]) -> Result<Vec<BoundCurve>> {
    check_cap(n)?;
    for &w in omega_grid {
        check_unit("omega", w)?;
    }
    let mut kinds = vec![CurveKind::Ent];
    for p in partitions {
        if p.n() != n {
            return Err(Error::InvalidPartition(format!("{p} does not partition {n} parties")));
        }
        let kind = CurveKind::Partition(p.clone());
        if !p.is_full() && !p.is_fully_separable() && !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    kinds.push(CurveKind::Sep);

    let rows: Vec<Vec<f64>> = omega_grid
        .par_iter()
        .map(|&w| {
            kinds
                .iter()
                .map(|k| match k {
                    CurveKind::Ent => p_ent(w, n),
                    CurveKind::Sep => Ok(sep_bound(w, n)),
                    CurveKind::Partition(p) => partition_bound(w, p).map(|r| r.value),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(kinds
        .into_iter()
        .enumerate()
        .map(|(j, kind)| BoundCurve {
            kind,
            values: rows.iter().map(|r| r[j]).collect(),
        })
        .collect())
}
