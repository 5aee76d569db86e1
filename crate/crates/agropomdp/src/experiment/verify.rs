//! Reward identity check: recomputes the 1999 benchmark season's cumulative
//! rewards from the recorded outcome totals and compares them against the
//! stated values.
//!
//! The reward is linear in the season totals, so for each policy family
//! `w1 * yield - w2 * nitrogen - w3 * leaching` with the 1999 price weights
//! must land on the stated cumulative reward. This is pure arithmetic over
//! constants bundled with the toolkit; no simulation runs.

use crate::env::RewardWeights;

/// Maximum absolute gap tolerated between a recomputed and a stated reward.
/// The stated values are rounded to whole numbers, so anything beyond
/// rounding slack indicates an inconsistency.
pub const REWARD_TOLERANCE: f64 = 2.0;

/// One benchmark row: season totals, the stated reward, and the identity
/// recomputation.
#[derive(Debug, Clone)]
pub struct RewardCheckRow {
    pub label: &'static str,
    pub yield_kg_ha: f64,
    pub nitrogen: f64,
    pub leaching: f64,
    pub stated_reward: f64,
    pub recomputed: f64,
    /// Informative rows report their gap but do not gate the check.
    pub gated: bool,
}

impl RewardCheckRow {
    pub fn gap(&self) -> f64 {
        (self.recomputed - self.stated_reward).abs()
    }

    pub fn passes(&self) -> bool {
        self.gap() <= REWARD_TOLERANCE
    }
}

#[derive(Debug, Clone)]
pub struct RewardCheckReport {
    pub rows: Vec<RewardCheckRow>,
}

impl RewardCheckReport {
    /// True when every gated row reconstructs its stated reward.
    pub fn all_gated_pass(&self) -> bool {
        self.rows.iter().filter(|r| r.gated).all(|r| r.passes())
    }

    pub fn table_csv(&self) -> String {
        let mut out =
            String::from("policy,yield_kg_ha,nitrogen_kg_ha,leaching_kg_ha,stated,recomputed,gap,status\n");
        for row in &self.rows {
            let status = match (row.gated, row.passes()) {
                (true, true) => "pass",
                (true, false) => "fail",
                (false, _) => "informative",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{:.2},{:.2},{}\n",
                row.label,
                row.yield_kg_ha,
                row.nitrogen,
                row.leaching,
                row.stated_reward,
                row.recomputed,
                row.gap(),
                status
            ));
        }
        out
    }
}

/// Recomputes each benchmark reward from its season totals.
///
/// The first fixed-schedule row is informative only: its stated reward sits
/// about 5 off the identity, a known inconsistency in the source numbers that
/// the check reports without gating on.
pub fn verify_rewards() -> RewardCheckReport {
    // (label, yield kg/ha, nitrogen kg/ha, leaching kg/ha, stated reward, gated)
    const OUTCOMES: [(&str, f64, f64, f64, f64, bool); 6] = [
        ("mdp28", 9247.0, 360.0, 0.14, 515.0, true),
        ("pomdp28", 9243.0, 180.0, 0.12, 584.0, true),
        ("mdp10", 9226.0, 560.0, 0.20, 435.0, true),
        ("pomdp10", 9243.0, 180.0, 0.12, 584.0, true),
        ("expert-1", 6236.0, 56.0, 0.12, 425.0, false),
        ("expert-2", 9247.0, 224.0, 0.26, 567.0, true),
    ];
    let w = RewardWeights::season_1999();
    let rows = OUTCOMES
        .iter()
        .map(|&(label, y, n, l, stated, gated)| RewardCheckRow {
            label,
            yield_kg_ha: y,
            nitrogen: n,
            leaching: l,
            stated_reward: stated,
            recomputed: w.w1 * y - w.w2 * n - w.w3 * l,
            gated,
        })
        .collect();
    RewardCheckReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_gated_rows_reconstruct_their_stated_rewards() {
        let report = verify_rewards();
        assert!(report.all_gated_pass(), "{}", report.table_csv());
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.rows.iter().filter(|r| r.gated).count(), 5);
    }

    #[test]
    fn recomputation_matches_hand_arithmetic() {
        let report = verify_rewards();
        let mdp28 = &report.rows[0];
        // 0.07087 * 9247 - 0.39 * 360 - 1.95 * 0.14
        assert!((mdp28.recomputed - 514.66).abs() < 0.05, "{}", mdp28.recomputed);
        let expert2 = report.rows.iter().find(|r| r.label == "expert-2").unwrap();
        assert!((expert2.recomputed - 567.47).abs() < 0.05, "{}", expert2.recomputed);
    }

    #[test]
    fn first_schedule_row_is_informative_and_off_identity() {
        let report = verify_rewards();
        let row = report.rows.iter().find(|r| r.label == "expert-1").unwrap();
        assert!(!row.gated);
        // Stated 425 vs identity near 419.9: reported, not gated.
        assert!(row.gap() > REWARD_TOLERANCE, "gap {}", row.gap());
        assert!((row.recomputed - 419.9).abs() < 0.1, "{}", row.recomputed);
    }

    #[test]
    fn csv_table_has_a_row_per_policy_and_marks_status() {
        let csv = verify_rewards().table_csv();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.contains("expert-1") && csv.contains("informative"));
        assert!(!csv.contains("fail"));
    }
}
