//! The fixture corpus, embedded at compile time.

use crate::automata::{rcm_to_pa, ParikhAutomaton};
use crate::document::Document;
use crate::error::{Error, Result};

/// `(name, json)` for every fixture.
pub const ALL: &[(&str, &str)] = &[
    ("intro", include_str!("../../../fixtures/intro.json")),
    ("rmk_comp", include_str!("../../../fixtures/rmk_comp.json")),
    ("l3", include_str!("../../../fixtures/l3.json")),
    ("labab", include_str!("../../../fixtures/labab.json")),
    ("leven", include_str!("../../../fixtures/leven.json")),
    ("d", include_str!("../../../fixtures/d.json")),
    ("shamir", include_str!("../../../fixtures/shamir.json")),
    ("astar", include_str!("../../../fixtures/astar.json")),
    ("aastar", include_str!("../../../fixtures/aastar.json")),
    ("abstar", include_str!("../../../fixtures/abstar.json")),
    ("sigma_star", include_str!("../../../fixtures/sigma_star.json")),
    ("anbn", include_str!("../../../fixtures/anbn.json")),
];

pub fn source(name: &str) -> Result<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).ok_or_else(|| Error::Document(format!("no fixture `{name}`")))
}

pub fn document(name: &str) -> Result<Document> {
    Document::from_json(source(name)?)
}

/// The fixture as a Parikh automaton; RCM fixtures are converted.
pub fn pa(name: &str) -> Result<ParikhAutomaton> {
    match document(name)? {
        Document::Pa(a) => Ok(a),
        Document::Rcm(r) => Ok(rcm_to_pa(&r)),
        d => Err(Error::Document(format!("fixture `{name}` is a {} document", d.kind()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_and_round_trips() {
        for (name, text) in ALL {
            let d = Document::from_json(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(Document::from_json(&d.to_json()).unwrap(), d, "{name}");
            pa(name).unwrap();
        }
    }
}
