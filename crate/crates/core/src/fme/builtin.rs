//! Named decoding-constraint systems with their published inequality sets.
//!
//! Each entry bundles the constraints (with the elimination order), the
//! stated final region and the bounds the elimination is known to leave on
//! top of it. The stated regions drop those bounds by an argument over all
//! input distributions, which is outside what elimination can see.

use std::fmt;

use super::{check_against_target, project, Axiom, Coeffs, Comparison, IneqSystem, LinIneq, Projection};
use crate::error::{Error, Result};

struct Entry {
    name: &'static str,
    summary: &'static str,
    system: &'static str,
    target: &'static str,
    extras: &'static str,
}

// --- partial decode-and-forward ---

const DF_PARTIAL: &str = "
eliminate: R10, R20, T10, R11', R11'', R22
R1 = R10 + R11' + R11''
R2 = R20 + R22
-R10 <= 0
-R11' <= 0
-R11'' <= 0
-R20 <= 0
-R22 <= 0
# binning at the first source
R10 - T10 < -Ib
# relay
R11' < I(U1;Y3|V1X3Q)
T10 + R11' < I(V1U1;Y3|X3Q) + Ib
# destination 1
R11'' < I(X1;Y1|V1U1V2X3Q)
R11' + R11'' < I(X1X3;Y1|V1V2V3Q) + Ib
T10 + R11' + R11'' < I(X1X3;Y1|V2Q) + Ib
R11'' + R20 < I(X1V2;Y1|V1U1X3Q)
R11' + R11'' + R20 < I(X1V2X3;Y1|V1V3Q) + Ib
T10 + R11' + R11'' + R20 < I(X1V2X3;Y1|Q) + Ib
# destination 2
R22 < I(X2;Y2|V1V2V3Q)
R20 + R22 < I(X2;Y2|V1V3Q)
T10 + R22 < I(V1X2V3;Y2|V2Q)
T10 + R20 + R22 < I(V1X2V3;Y2|Q)
T10 < I(V1V3;Y2|X2Q)
# relations among the destination-1 terms
axiom: I(X1V2X3;Y1|Q) >= I(X1X3;Y1|V2Q)
axiom: I(X1V2X3;Y1|V1V3Q) >= I(X1X3;Y1|V1V2V3Q)
axiom: I(X1V2;Y1|V1U1X3Q) >= I(X1;Y1|V1U1V2X3Q)
axiom: I(X1X3;Y1|V1V2V3Q) >= I(X1;Y1|V1U1V2X3Q)
axiom: I(X1V2X3;Y1|V1V3Q) >= I(X1V2;Y1|V1U1X3Q)
axiom: I(X1V2;Y1|V1U1X3Q) + I(X1X3;Y1|V1V2V3Q) >= I(X1V2X3;Y1|V1V3Q)
# relay terms
axiom: I(V1U1;Y3|X3Q) >= I(U1;Y3|V1X3Q)
# relations among the destination-2 terms
axiom: I(V1X2V3;Y2|V2Q) >= I(V1V3;Y2|X2Q)
axiom: I(V1X2V3;Y2|Q) >= I(V1X2V3;Y2|V2Q)
axiom: I(V1V3;Y2|X2Q) + I(X2;Y2|V1V2V3Q) >= I(V1X2V3;Y2|V2Q)
# reduce the relay term to the smaller one without V1
rewrite: I(V1U1;Y3|X3Q) -> I(U1;Y3|X3Q)
";

const DF_PARTIAL_TARGET: &str = "
R1 <= I(U1;Y3|X3Q) + I(X1;Y1|V1U1V2X3Q)
R1 <= I(X1X3;Y1|V2Q)
R2 <= I(X2;Y2|V1V3Q)
R2 <= I(V1X2V3;Y2|Q) - Ib
R1 + R2 <= I(X1X3;Y1|V1V2V3Q) + I(V1X2V3;Y2|Q)
R1 + R2 <= I(U1;Y3|V1X3Q) + I(X1;Y1|V1U1V2X3Q) + I(V1X2V3;Y2|Q) - Ib
R1 + R2 <= I(X1V2X3;Y1|V1V3Q) + I(V1X2V3;Y2|V2Q)
R1 + R2 <= I(U1;Y3|V1X3Q) + I(X1V2;Y1|V1U1X3Q) + I(V1X2V3;Y2|V2Q) - Ib
R1 + R2 <= I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q) - Ib
R1 + R2 <= I(X1V2X3;Y1|Q) + I(X2;Y2|V1V2V3Q)
R1 + R2 <= I(U1;Y3|X3Q) + I(X1V2;Y1|V1U1X3Q) + I(X2;Y2|V1V2V3Q)
2*R1 + R2 <= I(X1X3;Y1|V1V2V3Q) + I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q)
2*R1 + R2 <= I(X1X3;Y1|V1V2V3Q) + I(X1V2;Y1|V1U1X3Q) + I(U1;Y3|X3Q) + I(V1X2V3;Y2|V2Q)
2*R1 + R2 <= I(U1;Y3|V1X3Q) + I(X1;Y1|V1U1V2X3Q) - Ib + I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q)
R1 + 2*R2 <= I(X1V2X3;Y1|V1V3Q) + I(X2;Y2|V1V2V3Q) + I(V1X2V3;Y2|Q)
R1 + 2*R2 <= I(U1;Y3|V1X3Q) + I(X1V2;Y1|V1U1X3Q) - Ib + I(X2;Y2|V1V2V3Q) + I(V1X2V3;Y2|Q)
";

const DF_PARTIAL_EXTRAS: &str = "
R1 < I(X1X3;Y1|V1V2V3Q) + I(V1V3;Y2|X2Q)
R1 < I(U1;Y3|V1X3Q) + I(X1;Y1|V1U1V2X3Q) + I(V1V3;Y2|X2Q) - Ib
R2 < I(X1V2;Y1|V1U1X3Q) + I(X2;Y2|V1V2V3Q)
R2 < I(X1V2;Y1|V1U1X3Q) + I(V1X2V3;Y2|V2Q) - Ib
";

// --- full decode-and-forward ---

const DF_FULL: &str = "
eliminate: R10, R20, T10, R11', R22
R1 = R10 + R11'
R2 = R20 + R22
-R10 <= 0
-R11' <= 0
-R20 <= 0
-R22 <= 0
# binning at the first source
R10 - T10 < -Ib
# relay
R11' < I(X1;Y3|V1X3Q)
T10 + R11' < I(X1;Y3|X3Q) + Ib
# destination 1
R11' < I(X1X3;Y1|V1V2V3Q) + Ib
T10 + R11' < I(X1X3;Y1|V2Q) + Ib
R11' + R20 < I(X1V2X3;Y1|V1V3Q) + Ib
T10 + R11' + R20 < I(X1V2X3;Y1|Q) + Ib
# destination 2
R22 < I(X2;Y2|V1V2V3Q)
R20 + R22 < I(X2;Y2|V1V3Q)
T10 + R22 < I(V1X2V3;Y2|V2Q)
T10 + R20 + R22 < I(V1X2V3;Y2|Q)
T10 < I(V1V3;Y2|X2Q)
# relations among the destination-1 terms
axiom: I(X1V2X3;Y1|Q) >= I(X1X3;Y1|V2Q)
axiom: I(X1V2X3;Y1|V1V3Q) >= I(X1X3;Y1|V1V2V3Q)
# relay terms
axiom: I(X1;Y3|X3Q) >= I(X1;Y3|V1X3Q)
# relations among the destination-2 terms
axiom: I(V1X2V3;Y2|V2Q) >= I(V1V3;Y2|X2Q)
axiom: I(V1X2V3;Y2|Q) >= I(V1X2V3;Y2|V2Q)
axiom: I(V1V3;Y2|X2Q) + I(X2;Y2|V1V2V3Q) >= I(V1X2V3;Y2|V2Q)
";

const DF_FULL_TARGET: &str = "
R1 <= I(X1;Y3|X3Q)
R1 <= I(X1X3;Y1|V2Q)
R2 <= I(X2;Y2|V1V3Q)
R2 <= I(V1X2V3;Y2|Q) - Ib
R1 + R2 <= I(X1X3;Y1|V1V2V3Q) + I(V1X2V3;Y2|Q)
R1 + R2 <= I(X1;Y3|V1X3Q) + I(V1X2V3;Y2|Q) - Ib
R1 + R2 <= I(X1V2X3;Y1|V1V3Q) + I(V1X2V3;Y2|V2Q)
R1 + R2 <= I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q) - Ib
R1 + R2 <= I(X1V2X3;Y1|Q) + I(X2;Y2|V1V2V3Q)
2*R1 + R2 <= I(X1X3;Y1|V1V2V3Q) + I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q)
2*R1 + R2 <= I(X1;Y3|V1X3Q) + I(X1V2X3;Y1|Q) + I(V1X2V3;Y2|V2Q) - Ib
R1 + 2*R2 <= I(X1V2X3;Y1|V1V3Q) + I(X2;Y2|V1V2V3Q) + I(V1X2V3;Y2|Q)
";

const DF_FULL_EXTRAS: &str = "
R1 < I(X1X3;Y1|V1V2V3Q) + I(V1V3;Y2|X2Q)
R1 < I(X1;Y3|V1X3Q) + I(V1V3;Y2|X2Q) - Ib
R2 < I(X1V2X3;Y1|V1V3Q) + I(X2;Y2|V1V2V3Q) + Ib
";

// --- compress-and-forward ---

const CF_JOINT: &str = "
eliminate: R10, R11, R20, R22
R1 = R10 + R11
R2 = R20 + R22
-R10 <= 0
-R11 <= 0
-R20 <= 0
-R22 <= 0
# destination 1
R11 <= I11
R10 + R11 <= I12
R20 + R11 <= I13
R10 + R11 + R20 <= I14
# destination 2
R22 <= I21
R20 + R22 <= I22
R10 + R22 <= I23
R10 + R20 + R22 <= I24
# ordering of the compressed-observation terms
axiom: I12 >= I11
axiom: I13 >= I11
axiom: I14 >= I12
axiom: I14 >= I13
axiom: I22 >= I21
axiom: I23 >= I21
axiom: I24 >= I22
axiom: I24 >= I23
";

const CF_JOINT_TARGET: &str = "
R1 <= I12
R2 <= I22
R1 + R2 <= I11 + I24
R1 + R2 <= I13 + I23
R1 + R2 <= I21 + I14
2*R1 + R2 <= I11 + I14 + I23
R1 + 2*R2 <= I21 + I24 + I13
";

const CF_JOINT_EXTRAS: &str = "
R1 <= I11 + I23
R2 <= I21 + I13
";

const CF_SINGLE: &str = "
eliminate: R10, R11, R20, R22
R1 = R10 + R11
R2 = R20 + R22
-R10 <= 0
-R11 <= 0
-R20 <= 0
-R22 <= 0
# destination 1 uses the relay
R11 <= I11
R10 + R11 <= I12
R20 + R11 <= I13
R10 + R11 + R20 <= I14
# destination 2 ignores it
R22 <= I'21
R20 + R22 <= I'22
R10 + R22 <= I'23
R10 + R20 + R22 <= I'24
axiom: I12 >= I11
axiom: I13 >= I11
axiom: I14 >= I12
axiom: I14 >= I13
axiom: I'22 >= I'21
axiom: I'23 >= I'21
axiom: I'24 >= I'22
axiom: I'24 >= I'23
";

const CF_SINGLE_TARGET: &str = "
R1 <= I12
R2 <= I'22
R1 + R2 <= I11 + I'24
R1 + R2 <= I14 + I'21
R1 + R2 <= I13 + I'23
2*R1 + R2 <= I11 + I14 + I'23
R1 + 2*R2 <= I13 + I'21 + I'24
";

const CF_SINGLE_EXTRAS: &str = "
R1 <= I11 + I'23
R2 <= I13 + I'21
";

const ENTRIES: [Entry; 4] = [
    Entry {
        name: "df-full",
        summary: "decode-and-forward, relay decodes the whole first message",
        system: DF_FULL,
        target: DF_FULL_TARGET,
        extras: DF_FULL_EXTRAS,
    },
    Entry {
        name: "df-partial",
        summary: "decode-and-forward, relay decodes the common part and one private layer",
        system: DF_PARTIAL,
        target: DF_PARTIAL_TARGET,
        extras: DF_PARTIAL_EXTRAS,
    },
    Entry {
        name: "cf-joint",
        summary: "compress-and-forward, both destinations use the compression index",
        system: CF_JOINT,
        target: CF_JOINT_TARGET,
        extras: CF_JOINT_EXTRAS,
    },
    Entry {
        name: "cf-single-k",
        summary: "compress-and-forward, only destination 1 uses the compression index",
        system: CF_SINGLE,
        target: CF_SINGLE_TARGET,
        extras: CF_SINGLE_EXTRAS,
    },
];

pub fn builtin_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

/// A parsed built-in system.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    pub system: IneqSystem,
    /// The published final region.
    pub target: IneqSystem,
    /// Bounds left by elimination on top of the published region.
    pub expected_extras: Vec<LinIneq>,
}

pub fn system(name: &str) -> Result<Builtin> {
    let e = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownSystem(format!("`{name}` (known: {})", builtin_names().join(", "))))?;
    Ok(Builtin {
        name: e.name,
        summary: e.summary,
        system: e.system.parse()?,
        target: e.target.parse()?,
        expected_extras: e.extras.parse::<IneqSystem>()?.ineqs,
    })
}

/// Outcome of eliminating a built-in system and comparing the result.
#[derive(Debug, Clone)]
pub struct FmeCheck {
    pub builtin: Builtin,
    pub projection: Projection,
    pub comparison: Comparison,
    /// Extras found that are not on the expected list.
    pub unexpected_extras: Vec<LinIneq>,
    /// Expected extras that did not show up.
    pub absent_extras: Vec<LinIneq>,
}

impl FmeCheck {
    pub fn pass(&self) -> bool {
        self.comparison.missing.is_empty() && self.unexpected_extras.is_empty() && self.absent_extras.is_empty()
    }
}

/// Runs the elimination for a named system and compares it with its
/// published region and expected extras.
pub fn fme_check(name: &str) -> Result<FmeCheck> {
    let builtin = system(name)?;
    let projection = project(&builtin.system);
    // a region is empty unless its conditions hold, so they may serve as
    // premises
    let mut derived = projection.system.clone();
    derived.axioms.extend(projection.conditions.iter().map(|c| Axiom { lhs: c.syms.clone(), rhs: Coeffs::new() }));
    let comparison = check_against_target(&derived, &builtin.target);
    let found = &comparison.extra_in_derived;
    let unexpected_extras =
        found.iter().filter(|x| !builtin.expected_extras.iter().any(|e| e.same_as(x))).cloned().collect();
    let absent_extras =
        builtin.expected_extras.iter().filter(|e| !found.iter().any(|x| x.same_as(e))).cloned().collect();
    Ok(FmeCheck { builtin, projection, comparison, unexpected_extras, absent_extras })
}

fn section(f: &mut fmt::Formatter<'_>, title: &str, v: &[LinIneq]) -> fmt::Result {
    writeln!(f, "{title} ({}):", v.len())?;
    for x in v {
        writeln!(f, "  {x}")?;
    }
    Ok(())
}

impl fmt::Display for FmeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system: {} ({})", self.builtin.name, self.builtin.summary)?;
        section(f, "derived", &self.projection.system.ineqs)?;
        if !self.projection.conditions.is_empty() {
            section(f, "conditions on symbols", &self.projection.conditions)?;
        }
        section(f, "matched", &self.comparison.matched)?;
        section(f, "extra_in_derived", &self.comparison.extra_in_derived)?;
        section(f, "missing", &self.comparison.missing)?;
        if !self.unexpected_extras.is_empty() {
            section(f, "unexpected extras", &self.unexpected_extras)?;
        }
        if !self.absent_extras.is_empty() {
            section(f, "expected extras not found", &self.absent_extras)?;
        }
        write!(f, "result: {}", if self.pass() { "PASS" } else { "FAIL" })
    }
}
