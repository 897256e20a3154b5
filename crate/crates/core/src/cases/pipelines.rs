//! The three elimination arguments as step lists.

use super::{Expect, InitialFact, Op, Pipeline, Src, Step};
use crate::algebra::atoms;

use Src::{Eq, Step as At};

fn step(id: &'static str, op: Op, expect: Expect, justification: &'static str) -> Step {
    Step {
        id,
        op,
        expect,
        justification,
    }
}

fn zero_function(symbol: &'static str) -> InitialFact {
    InitialFact {
        symbol,
        value: "0",
        propagate: true,
    }
}

fn solve(from: Src, symbol: &'static str) -> Op {
    Op::Solve {
        from,
        symbol,
        propagate: true,
    }
}

/// Constant λ: the connection collapses and the dF rule forces σ = 0.
pub fn const_lambda() -> Pipeline {
    Pipeline {
        name: "const-lambda",
        assumptions: vec!["lambda sigma != 0", "d lambda = 0 on an open set"],
        extra_atoms: Vec::new(),
        connection: true,
        facts: vec![zero_function("lambda{i}")],
        steps: vec![
            step(
                "fg",
                Op::Evaluate(vec!["F{i}", "G{i}"]),
                Expect::Zero,
                "solved F and G components with every lambda_i = 0",
            ),
            step(
                "dF",
                Op::Rule("F"),
                Expect::Values(vec!["0", "sigma", "0", "0", "sigma", "0"]),
                "dF rule with F = G = 0 leaves sigma (A^C - D^B)",
            ),
            step(
                "dG",
                Op::Rule("G"),
                Expect::Values(vec!["0", "0", "-sigma", "sigma", "0", "0"]),
                "dG rule with F = G = 0 leaves -sigma (A^D - B^C)",
            ),
            step(
                "sigma",
                Op::Entry("dF", 1),
                Expect::Unit,
                "F = 0 gives dF = 0, so the A^C coefficient vanishes; it is sigma",
            ),
        ],
        conclusion: "sigma = 0, contradicting sigma != 0",
    }
}

/// Integrable `span(e₃, e₄)` with λ₄ = 0: the equations collapse to a
/// quartic in λ, σ with no real zero besides λ = σ = 0.
pub fn case_ii() -> Pipeline {
    Pipeline {
        name: "case-ii",
        assumptions: vec![
            "lambda sigma != 0",
            "lambda4 = 0",
            "lambda3 > 0, used as lambda3 != 0",
            "lambda1 = lambda2 = 0 (span(e3, e4) integrable)",
        ],
        extra_atoms: vec![atoms::lambda3()],
        connection: false,
        facts: vec![zero_function("lambda1"), zero_function("lambda2"), zero_function("lambda4")],
        steps: vec![
            step(
                "suc_1",
                Op::Solve {
                    from: Eq("b"),
                    symbol: "lambda31",
                    propagate: false,
                },
                Expect::Multiple(Eq("suc_1")),
                "b",
            ),
            step(
                "suc_2",
                Op::Solve {
                    from: Eq("b1"),
                    symbol: "lambda32",
                    propagate: false,
                },
                Expect::Multiple(Eq("suc_2")),
                "b1",
            ),
            step("suc_3", solve(Eq("b2"), "S1"), Expect::Multiple(Eq("suc_3")), "b2, divided by lambda3"),
            step("suc_4", solve(Eq("b3"), "S2"), Expect::Multiple(Eq("suc_4")), "b3, divided by lambda3"),
            step(
                "sigma2",
                solve(Eq("c"), "sigma2"),
                Expect::Multiple(Eq("ii_sigma2")),
                "c with S1 from suc_3; lambda sigma lambda3 != 0",
            ),
            step(
                "sigma1",
                solve(Eq("c1"), "sigma1"),
                Expect::Multiple(Eq("ii_sigma1")),
                "c1 with S2 from suc_4; lambda sigma lambda3 != 0",
            ),
            step("S1", Op::Substitute(Eq("ii_S1")), Expect::Zero, "suc_3 with sigma2 = 0"),
            step("S2", Op::Substitute(Eq("ii_S2")), Expect::Zero, "suc_4 with sigma1 = 0"),
            step("j", solve(Eq("j"), "S4"), Expect::Multiple(Eq("ii_j")), "j"),
            step("h", Op::Substitute(Eq("h")), Expect::Multiple(Eq("ii_h")), "h"),
            step(
                "lts_1",
                Op::Eliminate {
                    first: Eq("d2"),
                    second: At("h"),
                    symbol: "lambda3",
                    power: 2,
                },
                Expect::Multiple(Eq("lts_1")),
                "d2 against h; the lambda4 sigma4 terms of d2 drop out",
            ),
            step("sigma3", solve(At("lts_1"), "sigma3"), Expect::Multiple(Eq("lts_1")), "lts_1, divided by lambda3"),
            step("lts_2", Op::Substitute(Eq("ii_h")), Expect::Multiple(Eq("lts_2")), "h with lts_1"),
            step("els_i", Op::Substitute(Eq("d")), Expect::Multiple(Eq("els_i")), "d, divided by 4 sigma"),
            step("els_ii", Op::Substitute(Eq("d1")), Expect::Multiple(Eq("els_ii")), "d1, divided by 4 sigma"),
            step(
                "combine",
                Op::Combine(vec![(Eq("els_i"), "3 mu* mu+"), (Eq("els_ii"), "-3 mu* mu-")]),
                Expect::FreeOf(vec!["lambda33"]),
                "the lambda33 terms cancel",
            ),
            step(
                "reduce",
                Op::Rewrite {
                    target: At("combine"),
                    symbol: "lambda3",
                    power: 2,
                    relation: Eq("lts_2"),
                },
                Expect::FreeOf(vec!["lambda3"]),
                "lts_2",
            ),
            step(
                "final",
                Op::AtomDivide(At("reduce"), "512 lambda^2 sigma^2"),
                Expect::Exact(Eq("ii_final")),
                "division by 512 lambda^2 sigma^2",
            ),
            step(
                "positive",
                Op::Certificate(At("final")),
                Expect::Certified,
                "the quartic vanishes only at lambda = sigma = 0",
            ),
        ],
        conclusion: "lambda^4 - 5 lambda^2 sigma^2 + 12 sigma^4 = 0 with lambda sigma != 0 is impossible",
    }
}

/// σ a function of λ with λ₄ = 0: six equations combine into a positive
/// multiple of λ₁² + λ₂² + λ₃².
pub fn case_iii() -> Pipeline {
    Pipeline {
        name: "case-iii",
        assumptions: vec![
            "lambda sigma (lambda1^2 + lambda2^2 + lambda3^2) != 0",
            "lambda4 = 0",
            "lambda3 > 0, used as lambda3 != 0",
            "lambda1, lambda2 not both zero",
            "sigma a function of lambda, sigma' = d sigma / d lambda",
        ],
        extra_atoms: vec![atoms::lambda3()],
        connection: false,
        facts: vec![
            zero_function("lambda4"),
            InitialFact {
                symbol: "sigma{i}",
                value: "sigma' lambda{i}",
                propagate: false,
            },
            InitialFact {
                symbol: "sigma{i}{j}",
                value: "sigma' lambda{i}{j} + sigma'' lambda{i} lambda{j}",
                propagate: false,
            },
        ],
        steps: vec![
            step(
                "intro",
                Op::Combine(vec![(Eq("intro_a"), "lambda2"), (Eq("intro_b"), "lambda1")]),
                Expect::FreeOf(vec!["sigma1", "sigma2", "sigma3", "sigma4"]),
                "the two first-order constraints, weighted by lambda2 and lambda1",
            ),
            step(
                "fsq",
                Op::Cofactor(At("intro"), "lambda1^2 + lambda2^2"),
                Expect::Multiple(Eq("fsq_i")),
                "lambda1, lambda2 not both zero; lambda3 != 0",
            ),
            step("sigma'", solve(At("fsq"), "sigma'"), Expect::Multiple(Eq("fsq_i")), "fsq_i"),
            step(
                "fsq_ii",
                Op::LambdaDerivative(At("fsq")),
                Expect::Multiple(Eq("fsq_ii")),
                "derivative of fsq_i along lambda, with fsq_i imposed",
            ),
            step(
                "sigma''",
                solve(At("fsq_ii"), "sigma''"),
                Expect::Multiple(Eq("fsq_ii")),
                "fsq_ii",
            ),
            step(
                "rule_1",
                Op::Evaluate(vec!["8 lambda sigma sigma{i} - (12 sigma^2 - lambda^2) lambda{i}"]),
                Expect::Zero,
                "replace 8 lambda sigma sigma_i with (12 sigma^2 - lambda^2) lambda_i",
            ),
            step(
                "rule_2",
                Op::Evaluate(vec!["8 lambda sigma sigma{i} - mu* lambda{i} - 8 sigma^2 lambda{i}"]),
                Expect::Zero,
                "replace 8 lambda sigma sigma_i - mu* lambda_i with 8 sigma^2 lambda_i",
            ),
            step(
                "rule_3",
                Op::Evaluate(vec![
                    "8 lambda sigma^2 (8 lambda sigma sigma{i}{j} - mu* lambda{i}{j}) - 64 lambda sigma^4 lambda{i}{j} \
                     - (4 sigma^2 - lambda^2)(12 sigma^2 + lambda^2) lambda{i} lambda{j}",
                ]),
                Expect::Zero,
                "replace 8 lambda sigma^2 (8 lambda sigma sigma_ij - mu* lambda_ij) with \
                 64 lambda sigma^4 lambda_ij + (4 sigma^2 - lambda^2)(12 sigma^2 + lambda^2) lambda_i lambda_j",
            ),
            step("iii_d", Op::Substitute(Eq("d")), Expect::Multiple(Eq("iii_d")), "d"),
            step("iii_d1", Op::Substitute(Eq("d1")), Expect::Multiple(Eq("iii_d1")), "d1"),
            step(
                "iii_d2",
                Op::Substitute(Eq("d2")),
                Expect::Multiple(Eq("iii_d2")),
                "d2; its lambda4 sigma4 terms drop out",
            ),
            step("iii_d3", Op::Substitute(Eq("d3")), Expect::Multiple(Eq("iii_d3")), "d3"),
            step("iii_h", Op::Substitute(Eq("h")), Expect::Multiple(Eq("iii_h")), "h"),
            step("iii_h4", Op::Substitute(Eq("h4")), Expect::Multiple(Eq("iii_h4")), "h4"),
            step(
                "final",
                Op::Combine(vec![
                    (Eq("iii_d"), "1"),
                    (Eq("iii_d1"), "1"),
                    (Eq("iii_d2"), "1"),
                    (Eq("iii_d3"), "1"),
                    (Eq("iii_h"), "-4 sigma"),
                    (Eq("iii_h4"), "-4 sigma"),
                ]),
                Expect::Exact(Eq("iii_final")),
                "sum of the first four minus 4 sigma times the last two",
            ),
            step(
                "positive",
                Op::Certificate(At("final")),
                Expect::Certified,
                "lambda1^2 + lambda2^2 + lambda3^2 != 0",
            ),
        ],
        conclusion: "8 lambda^2 sigma (lambda1^2 + lambda2^2 + lambda3^2) = 0 contradicts the nondegeneracy assumption",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(r: &super::super::PipelineReport) -> String {
        r.failed()
            .iter()
            .map(|s| format!("{}: {:?} {:?}", s.id, s.residual, s.values))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn constant_lambda_forces_sigma_zero() {
        let r = const_lambda().run();
        assert!(r.passed, "{}", show(&r));
        assert_eq!(r.step("fg").unwrap().values.len(), 8);
        assert_eq!(r.step("sigma").unwrap().values, vec!["sigma".to_string()]);
    }

    #[test]
    fn case_ii_reaches_the_quartic() {
        let r = case_ii().run();
        assert!(r.passed, "{}", show(&r));
        let cert = r.certificate.as_ref().unwrap();
        assert_eq!(cert.terms.len(), 2);
    }

    #[test]
    fn case_iii_reaches_the_sum_of_squares() {
        let r = case_iii().run();
        assert!(r.passed, "{}", show(&r));
        assert_eq!(r.certificate.as_ref().unwrap().terms.len(), 3);
    }

    #[test]
    fn wrong_expectation_pinpoints_the_step() {
        let mut p = case_ii();
        let k = p.steps.iter().position(|s| s.id == "suc_3").unwrap();
        p.steps[k].expect = Expect::Multiple(Eq("suc_4"));
        let r = p.run();
        assert!(!r.passed);
        let failed = r.failed();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].id, "suc_3");
        assert!(failed[0].residual.is_some());
    }

    #[test]
    fn reports_serialize() {
        let r = const_lambda().run();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["name"], "const-lambda");
        assert_eq!(v["steps"].as_array().unwrap().len(), 4);
        assert_eq!(v["steps"][3]["kind"], "substitute");
    }
}
