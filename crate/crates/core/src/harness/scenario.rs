//! Built-in multitasking scenarios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The benchmark instances, in ascending dimension.
pub const INSTANCE_NAMES: [&str; 8] = [
    "pr76", "pr107", "pr124", "pr136", "pr144", "pr152", "pr226", "pr264",
];

/// Membership of each built-in scenario over [`INSTANCE_NAMES`].
const MEMBERSHIP: [(&str, [u8; 8]); 15] = [
    ("Test_Case_4_1", [1, 1, 1, 1, 0, 0, 0, 0]),
    ("Test_Case_4_2", [0, 0, 0, 0, 1, 1, 1, 1]),
    ("Test_Case_4_3", [1, 1, 0, 0, 0, 0, 1, 1]),
    ("Test_Case_4_4", [0, 0, 1, 1, 1, 1, 0, 0]),
    ("Test_Case_4_5", [1, 0, 1, 1, 0, 0, 1, 0]),
    ("Test_Case_4_6", [0, 1, 0, 0, 1, 1, 0, 1]),
    ("Test_Case_4_7", [1, 1, 0, 1, 0, 1, 0, 0]),
    ("Test_Case_4_8", [0, 0, 1, 0, 1, 0, 1, 1]),
    ("Test_Case_4_9", [1, 0, 0, 1, 1, 0, 1, 0]),
    ("Test_Case_4_10", [0, 1, 1, 0, 0, 1, 0, 1]),
    ("Test_Case_6_1", [1, 1, 1, 1, 1, 1, 0, 0]),
    ("Test_Case_6_2", [0, 0, 1, 1, 1, 1, 1, 1]),
    ("Test_Case_6_3", [1, 1, 0, 0, 1, 1, 1, 1]),
    ("Test_Case_6_4", [1, 1, 0, 1, 1, 0, 1, 1]),
    ("Test_Case_8", [1, 1, 1, 1, 1, 1, 1, 1]),
];

/// A named group of TSP instances solved together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub instance_names: Vec<String>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, instance_names: Vec<String>) -> Result<Self> {
        if instance_names.len() < 2 {
            return Err(Error::TooFewTasks {
                required: 2,
                actual: instance_names.len(),
            });
        }
        Ok(Scenario {
            name: name.into(),
            instance_names,
        })
    }

    pub fn tasks(&self) -> usize {
        self.instance_names.len()
    }
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    MEMBERSHIP
        .iter()
        .map(|(name, row)| Scenario {
            name: (*name).to_string(),
            instance_names: INSTANCE_NAMES
                .iter()
                .zip(row)
                .filter(|(_, &m)| m == 1)
                .map(|(n, _)| (*n).to_string())
                .collect(),
        })
        .collect()
}

pub fn find_scenario(name: &str) -> Result<Scenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &Scenario) -> Vec<&str> {
        s.instance_names.iter().map(String::as_str).collect()
    }

    #[test]
    fn fifteen_scenarios() {
        let all = builtin_scenarios();
        assert_eq!(all.len(), 15);
        assert_eq!(names(&all[0]), ["pr76", "pr107", "pr124", "pr136"]);
        assert_eq!(
            names(&find_scenario("Test_Case_6_3").unwrap()),
            ["pr76", "pr107", "pr144", "pr152", "pr226", "pr264"]
        );
        assert_eq!(
            names(&find_scenario("Test_Case_8").unwrap()),
            INSTANCE_NAMES
        );
        assert!(matches!(
            find_scenario("Test_Case_9"),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn four_task_cases_are_balanced() {
        let all = builtin_scenarios();
        let four: Vec<_> = all.iter().filter(|s| s.tasks() == 4).collect();
        assert_eq!(four.len(), 10);
        for inst in INSTANCE_NAMES {
            let count = four.iter().filter(|s| names(s).contains(&inst)).count();
            assert_eq!(count, 5, "{inst}");
        }
        assert_eq!(all.iter().filter(|s| s.tasks() == 6).count(), 4);
    }

    #[test]
    fn rejects_single_task() {
        assert!(Scenario::new("x", vec!["pr76".into()]).is_err());
    }
}
