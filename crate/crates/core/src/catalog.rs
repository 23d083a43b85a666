//! Static metadata: the shipped monads, laws and demos, each with the
//! anchor it is checked against.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Monad,
    Law,
    Demo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub kind: EntryKind,
    pub name: String,
    pub anchor: String,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub entries: Vec<Entry>,
}

const MONADS: &[(&str, &str, &str)] = &[
    ("powerset", "§2.1, \"η_X(x) = {x} and μ_X(𝒜) = ⋃𝒜\"", "P, all subsets"),
    ("nonempty-powerset", "§5.3, \"non-empty power-set monad\"", "P₊, nonempty subsets"),
    ("finite-powerset", "§4.3, finite power-set monad", "P_f, finite subsets (all subsets on a finite carrier)"),
    (
        "ultrafilter",
        "Defn 2, \"A^# = { F ∈ βX : A ∈ F }\"; §2.2, \"contains exactly one of A and X∖A\"",
        "β, ultrafilters found by search",
    ),
    ("filter", "§5.2, \"the well known filter monad 𝔽\"; §2.2, \"A, B ∈ F iff A ∩ B ∈ F\"", "𝔽, filters including the improper one"),
    ("multiset", "§4.2, \"the commutative monoid monad\"", "finite multisets, truncated at degree d"),
    (
        "normal-band",
        "§4.3, \"the set P_f^{**}X of bipointed finite subsets\" and \"(A,a,b) · (B,c,d) = (A ∪ B, a, d)\"",
        "free normal bands, truncated at degree d",
    ),
];

const LAWS: &[(&str, &str, &str)] = &[
    ("pf-over-p", "§4.3, weak distributive law of P over P_f", "S = P over T = P_f, by hitting sets; weak"),
    ("p-over-beta", "Eq. 7, \"⋃𝒜 ∈ F for all 𝒜 ∈ 𝐅\"", "S = P over T = β; weak"),
    ("p-over-multiset", "Eq. 8, \"{a_1 ⋯ a_n : each a_i ∈ A_i}\"", "S = P over T = multisets; strict"),
    ("p-over-normalband", "§4.3, \"the binary operation (18)\"", "S = P over T = normal bands; weak"),
    (
        "p-plus-over-beta",
        "§5.3, \"a weak distributive law of P₊ over β\"",
        "S = P₊ over T = β, the same comprehension; weak",
    ),
];

const DEMOS: &[(&str, &str, &str)] = &[
    (
        "vietoris",
        "Theorem 1, \"the weak lifting of the power-set monad associated to the canonical weak distributive law\"",
        "the Vietoris monad on finite discrete spaces",
    ),
    ("quantale", "§4.2, \"complete lattices X endowed with a commutative monoid structure\"", "P of a commutative monoid is a quantale"),
    ("semilattice", "§4.3, \"the set P_•(X) of all subsemigroups\"; Eq. 18", "subsemigroups of a meet-semilattice"),
    ("normal-band", "§4.3, \"P̃ takes a normal band X to the normal band P_•X\"", "subsemigroups of normal bands"),
    ("nonempty", "§5.3, \"we expect to obtain a weak distributive law of P₊ over β\"", "finite evidence for the proper Vietoris monad"),
    ("lattice-scan", "Prop 8, Prop 9, Lemma 15", "continuous lattices and the Lawson topology"),
];

pub fn catalog() -> Catalog {
    let mk = |kind, rows: &[(&str, &str, &str)]| {
        rows.iter()
            .map(|&(name, anchor, summary)| Entry {
                kind,
                name: name.into(),
                anchor: anchor.into(),
                summary: summary.into(),
            })
            .collect::<Vec<_>>()
    };
    let mut entries = mk(EntryKind::Monad, MONADS);
    entries.extend(mk(EntryKind::Law, LAWS));
    entries.extend(mk(EntryKind::Demo, DEMOS));
    Catalog { entries }
}

impl Catalog {
    pub fn of_kind(&self, kind: EntryKind) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    pub fn get(&self, kind: EntryKind, name: &str) -> Option<&Entry> {
        self.of_kind(kind).find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (kind, title) in [(EntryKind::Monad, "monads"), (EntryKind::Law, "laws"), (EntryKind::Demo, "demos")] {
            out.push_str(title);
            out.push_str(":\n");
            for e in self.of_kind(kind) {
                out.push_str(&format!("  {:<18} {}\n  {:<18} [{}]\n", e.name, e.summary, "", e.anchor));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_names_are_listed() {
        let c = catalog();
        assert_eq!(c.of_kind(EntryKind::Monad).count(), 7);
        for m in c.of_kind(EntryKind::Monad) {
            assert!(crate::zoo::by_name(&m.name, Default::default()).is_ok(), "{}", m.name);
        }
        for l in c.of_kind(EntryKind::Law) {
            assert!(crate::lawengine::law_by_name(&l.name, Default::default()).is_ok(), "{}", l.name);
        }
        assert!(c.get(EntryKind::Law, "p-over-beta").unwrap().anchor.contains("Eq. 7"));
    }

    #[test]
    fn json_round_trip() {
        let c = catalog();
        let back: Catalog = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
