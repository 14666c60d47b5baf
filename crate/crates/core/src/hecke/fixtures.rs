//! Reference Hecke matrices stored as quantum-number expressions.
//!
//! A [`Fixture`] describes one family of matrices `U^(x,y)`: vertex and
//! row-label templates, an entry matrix of expressions and the integer
//! parameters it ranges over. Each assignment is rendered to concrete
//! labels, the matrix is computed from the cells and compared entry-wise.
//! Listed rows whose path does not exist on the graph are dropped; computed
//! rows that are not listed must vanish.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{hecke_operator, HeckeOperator};
use crate::cells::{CellSystem, Variant};
use crate::error::{CellforgeError, Result};
use crate::expr::{eval, eval_int, render_template};
use crate::graphs::{Family, GraphSpec};
use crate::qnum::QContext;

/// One parametrised reference matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    /// Source vertex template, e.g. `j_{l}`.
    pub x: String,
    /// Target vertex template.
    pub y: String,
    /// Row label templates; empty for a `1 x 1` matrix whose single row
    /// is not named.
    pub rows: Vec<String>,
    /// Entry expressions, `rows.len()` square (or `1 x 1`).
    pub entries: Vec<Vec<String>>,
    /// `(variable, low, high)` ranges, inclusive, evaluated in order.
    pub ranges: Vec<(String, String, String)>,
    /// Integer condition on the base variables; the fixture applies when it
    /// evaluates to a nonzero value.
    pub when: Option<String>,
    /// Labels inside `{...}` are wrapped into `1..=modulus`.
    pub modulus: Option<i64>,
    /// The entries describe a block of the operator; rows outside the
    /// listed ones are not checked.
    pub block: bool,
}

impl Fixture {
    fn new(x: &str, y: &str, rows: &[&str], entries: &[&[&str]]) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            rows: rows.iter().map(|s| s.to_string()).collect(),
            entries: entries
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
            ranges: Vec::new(),
            when: None,
            modulus: None,
            block: false,
        }
    }

    fn scalar(x: &str, y: &str, value: &str) -> Self {
        Self::new(x, y, &[], &[&[value]])
    }

    fn over(mut self, var: &str, lo: &str, hi: &str) -> Self {
        self.ranges.push((var.into(), lo.into(), hi.into()));
        self
    }

    fn when(mut self, cond: &str) -> Self {
        self.when = Some(cond.into());
        self
    }

    fn modulo(mut self, m: i64) -> Self {
        self.modulus = Some(m);
        self
    }

    fn block(mut self) -> Self {
        self.block = true;
        self
    }

    fn subst(mut self, subs: &[(&str, &str)]) -> Self {
        for row in &mut self.entries {
            for e in row.iter_mut() {
                for (k, v) in subs {
                    *e = e.replace(k, &format!("({v})"));
                }
            }
        }
        self
    }

    /// The same entries on another `(x, y)` with its own row labels.
    fn alias(&self, x: &str, y: &str, rows: &[&str]) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            rows: rows.iter().map(|s| s.to_string()).collect(),
            ..self.clone()
        }
    }

    /// Display name, e.g. `U^(j_{l},j_{l-2})`.
    pub fn name(&self) -> String {
        format!("U^({},{})", self.x, self.y)
    }
}

/// Deviation of one concrete matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureDeviation {
    /// Fixture template name.
    pub fixture: String,
    /// Rendered matrix name, e.g. `U^(j_1,j_5)`.
    pub matrix: String,
    pub deviation: f64,
    /// Row and column labels of the worst entry.
    pub worst: (String, String),
    /// `max |E^2 - [2]E|` of the reference matrix `E` itself, or `None`
    /// when the reference lists only a block of the operator. A nonzero
    /// value means the reference cannot be a Hecke generator for any cells.
    pub reference_residual: Option<f64>,
}

/// Result of [`fixture_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureReport {
    pub graph: String,
    /// Concrete matrices compared.
    pub matrices: usize,
    /// Largest entry-wise deviation.
    pub max: f64,
    pub deviations: Vec<FixtureDeviation>,
}

impl FixtureReport {
    /// Matrices whose deviation exceeds `tol`.
    pub fn failures(&self, tol: f64) -> Vec<&FixtureDeviation> {
        self.deviations
            .iter()
            .filter(|d| !(d.deviation <= tol))
            .collect()
    }
}

fn base_env(spec: GraphSpec) -> Vec<(&'static str, i64)> {
    let big_n = i64::from(spec.n);
    let mut env = vec![("N", big_n)];
    match spec.family {
        Family::A | Family::D => {
            env.push(("n", big_n));
            env.push(("k", big_n / 3 - 1));
        }
        Family::AStar | Family::DStar => {
            let n = big_n / 2;
            env.push(("n", n));
            env.push(("m", n / 2));
            env.push(("even", i64::from(n % 2 == 0)));
        }
        _ => env.push(("n", big_n)),
    }
    env
}

fn a_fixtures() -> Vec<Fixture> {
    let lattice = |f: Fixture| f.over("a", "0", "n-3").over("b", "0", "n-3-a");
    vec![
        lattice(Fixture::new(
            "({a},{b})",
            "({a},{b+1})",
            &["({a+1},{b})", "({a-1},{b+1})"],
            &[
                &["[a+2]/[a+1]", "sqrt([a][a+2])/[a+1]"],
                &["sqrt([a][a+2])/[a+1]", "[a]/[a+1]"],
            ],
        )),
        lattice(Fixture::new(
            "({a},{b})",
            "({a-1},{b})",
            &["({a-1},{b+1})", "({a},{b-1})"],
            &[
                &["[b+2]/[b+1]", "sqrt([b][b+2])/[b+1]"],
                &["sqrt([b][b+2])/[b+1]", "[b]/[b+1]"],
            ],
        )),
        lattice(Fixture::new(
            "({a},{b})",
            "({a+1},{b-1})",
            &["({a+1},{b})", "({a},{b-1})"],
            &[
                &["[a+b+3]/[a+b+2]", "sqrt([a+b+1][a+b+3])/[a+b+2]"],
                &["sqrt([a+b+1][a+b+3])/[a+b+2]", "[a+b+1]/[a+b+2]"],
            ],
        )),
    ]
}

fn d_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    let first = Fixture::new(
        "({k-1},{k-1})",
        "({k-1},{k})",
        &["({k},{k-1})/gamma", "({k},{k-1})/gamma'", "({k-2},{k})"],
        &[
            &["[k+1]/[k]", "0", "sqrt([k-1][k+1])/[k]"],
            &["0", "0", "0"],
            &["sqrt([k-1][k+1])/[k]", "0", "[k-1]/[k]"],
        ],
    );
    out.push(first.alias(
        "({k},{k-1})",
        "({k-1},{k-1})",
        &["({k-1},{k})/gamma", "({k-1},{k})/gamma'", "({k},{k-2})"],
    ));
    out.push(first);
    let second = Fixture::new(
        "({k+1},{k-2})",
        "({k-1},{k})",
        &["({k},{k-1})/gamma", "({k},{k-1})/gamma'", "({k-2},{k})"],
        &[
            &["0", "0", "0"],
            &["0", "[k+1]/[k+2]", "sqrt([k+1][k+3])/[k+2]"],
            &["0", "sqrt([k+1][k+3])/[k+2]", "[k+3]/[k+2]"],
        ],
    );
    out.push(second.alias(
        "({k},{k-1})",
        "({k+1},{k-2})",
        &["({k-1},{k})/gamma", "({k-1},{k})/gamma'", "({k},{k-2})"],
    ));
    out.push(second);
    let third = Fixture::new(
        "({k},{k-1})",
        "({k},{k})_{i}",
        &["({k-1},{k})/gamma", "({k-1},{k})/gamma'"],
        &[
            &["[k]/[k+1]", "conj(eps(i))sqrt([k][k+2])/[k+1]"],
            &["eps(i)sqrt([k][k+2])/[k+1]", "[k+2]/[k+1]"],
        ],
    )
    .over("i", "1", "3");
    out.push(third.alias(
        "({k},{k})_{i}",
        "({k-1},{k})",
        &["({k},{k-1})/gamma", "({k},{k-1})/gamma'"],
    ));
    out.push(third);
    out.push(
        Fixture::new(
            "({k-1},{k})",
            "({k},{k-1})",
            &[
                "({k},{k})_1",
                "({k},{k})_2",
                "({k},{k})_3",
                "({k-1},{k-1})",
                "({k+1},{k-2})",
            ],
            &[
                &["[2][k+1]$a", "conj($E)$a", "$E $a", "$b", "$c"],
                &["$E $a", "[2][k+1]$a", "conj($E)$a", "w*$b", "conj(w)*$c"],
                &["conj($E)$a", "$E $a", "[2][k+1]$a", "conj(w)*$b", "w*$c"],
                &["$b", "conj(w)*$b", "w*$b", "[k+3]/[k+2]", "0"],
                &["$c", "w*$c", "conj(w)*$c", "0", "[k-1]/[k]"],
            ],
        )
        .subst(&[
            ("$E", "w[k] + conj(w)[k+2]"),
            ("$a", "[k+1]/(3[k][k+2])"),
            ("$b", "sqrt([k+1][k+3])/(sqrt(3)[k+2])"),
            ("$c", "sqrt([k-1][k+1])/(sqrt(3)[k])"),
        ]),
    );
    out
}

fn astar_odd_fixtures() -> Vec<Fixture> {
    vec![
        Fixture::new(
            "{i}",
            "{i+1}",
            &["{i}", "{i+1}"],
            &[
                &["[i-1]/[i]", "sqrt([i-1][i+1])/[i]"],
                &["sqrt([i-1][i+1])/[i]", "[i+1]/[i]"],
            ],
        )
        .over("i", "1", "n-1"),
        Fixture::new(
            "{i}",
            "{i-1}",
            &["{i-1}", "{i}"],
            &[
                &["[i-2]/[i-1]", "sqrt([i-2][i])/[i-1]"],
                &["sqrt([i-2][i])/[i-1]", "[i]/[i-1]"],
            ],
        )
        .over("i", "2", "n"),
        Fixture::new(
            "{i}",
            "{i}",
            &["{i-1}", "{i}", "{i+1}"],
            &[
                &[
                    "[i][2i-3]/([i-1][2i-1])",
                    "(-1)^(i+1)sqrt([2i-3])/([i-1]sqrt([2i-1]))",
                    "sqrt([2i-3][2i+1])/[2i-1]",
                ],
                &[
                    "(-1)^(i+1)sqrt([2i-3])/([i-1]sqrt([2i-1]))",
                    "1/([i-1][i])",
                    "(-1)^(i+1)sqrt([2i+1])/([i]sqrt([2i-1]))",
                ],
                &[
                    "sqrt([2i-3][2i+1])/[2i-1]",
                    "(-1)^(i+1)sqrt([2i+1])/([i]sqrt([2i-1]))",
                    "[i-1][2i+1]/([i][2i-1])",
                ],
            ],
        )
        .over("i", "2", "n"),
    ]
}

fn astar_even_fixtures() -> Vec<Fixture> {
    let diag = |x: &str| {
        Fixture::new(
            "{i}",
            "{i}",
            &["{i-1}", "{i}", "{i+1}"],
            &[
                &[
                    "[2i-2]([2i]+1)/([2i][2i+1])",
                    "(-1)^(i+1)sqrt($x $p)",
                    "sqrt([2i-2][2i-1][2i+2])/([2i]sqrt([2i+1]))",
                ],
                &["(-1)^(i+1)sqrt($x $p)", "$x", "(-1)^(i+1)sqrt($x $m)"],
                &[
                    "sqrt([2i-2][2i-1][2i+2])/([2i]sqrt([2i+1]))",
                    "(-1)^(i+1)sqrt($x $m)",
                    "[2i+2]([2i]-1)/([2i][2i+1])",
                ],
            ],
        )
        .subst(&[
            ("$x", x),
            ("$p", "[2i-2]([2i]+1)/([2i][2i+1])"),
            ("$m", "[2i+2]([2i]-1)/([2i][2i+1])"),
        ])
    };
    let plus = "([2][2i]+[4i])/([2i-1][2i][2i+1])";
    let minus = "([2][2i]-[4n-4i])/([2i-1][2i][2i+1])";
    vec![
        Fixture::new(
            "{i}",
            "{i+1}",
            &["{i}", "{i+1}"],
            &[
                &["([2i]-1)/[2i+1]", "sqrt(([2i]-1)([2i+2]+1))/[2i+1]"],
                &["sqrt(([2i]-1)([2i+2]+1))/[2i+1]", "([2i+2]+1)/[2i+1]"],
            ],
        )
        .over("i", "1", "n-2"),
        Fixture::new(
            "{i}",
            "{i-1}",
            &["{i-1}", "{i}"],
            &[
                &["([2i-2]-1)/[2i-1]", "sqrt(([2i-2]-1)([2i]+1))/[2i-1]"],
                &["sqrt(([2i-2]-1)([2i]+1))/[2i-1]", "([2i]+1)/[2i-1]"],
            ],
        )
        .over("i", "2", "n-1"),
        diag(plus).over("i", "1", "m-1").when("even"),
        diag("[2]/[2m-1]^2").over("i", "m", "m").when("even"),
        diag(minus).over("i", "m+1", "n-1").when("even"),
        diag(plus).over("i", "1", "m").when("1-even"),
        diag(minus).over("i", "m+1", "n-1").when("1-even"),
    ]
}

/// `[U^(a_l,c_r)]_{b_m,b_p}` on D* equals `[U^(l,r)]_{m,p}` on A* for each
/// rotation `(a,b,c)` of `(i,j,k)`.
fn dstar_from_astar(astar: Vec<Fixture>) -> Vec<Fixture> {
    let prefix = |t: &str, c: char| format!("{c}_{t}");
    let mut out = Vec::new();
    for f in astar {
        for (a, b, c) in [('i', 'j', 'k'), ('j', 'k', 'i'), ('k', 'i', 'j')] {
            let mut g = f.clone();
            g.x = prefix(&f.x, a);
            g.y = prefix(&f.y, c);
            g.rows = f.rows.iter().map(|r| prefix(r, b)).collect();
            out.push(g);
        }
    }
    out
}

fn e8_fixtures() -> Vec<Fixture> {
    let l = |f: Fixture| f.over("l", "1", "6").modulo(6);
    vec![
        l(Fixture::scalar("i_{l}", "j_{l-1}", "[2]")),
        l(Fixture::scalar("j_{l}", "i_{l}", "[2]")),
        l(Fixture::new(
            "j_{l}",
            "j_{l-2}",
            &["j_{l-1}", "j_{l+2}"],
            &[
                &["1/[2]", "(-1)^(l+1)sqrt([3])/[2]"],
                &["(-1)^(l+1)sqrt([3])/[2]", "[3]/[2]"],
            ],
        )),
        l(Fixture::new(
            "j_{l}",
            "j_{l+1}",
            &["j_{l-1}", "j_{l+2}", "i_{l+1}"],
            &[
                &["1/[2]", "1/[2]", "1/sqrt([3])"],
                &["1/[2]", "1/[2]", "1/sqrt([3])"],
                &["1/sqrt([3])", "1/sqrt([3])", "[2]/[3]"],
            ],
        )),
    ]
}

fn e8star_fixtures() -> Vec<Fixture> {
    let three = Fixture::new(
        "2",
        "3",
        &["2", "3", "4"],
        &[
            &["1/[2]", "1/[2]", "1/sqrt([3])"],
            &["1/[2]", "1/[2]", "1/sqrt([3])"],
            &["1/sqrt([3])", "1/sqrt([3])", "[2]/[3]"],
        ],
    );
    vec![
        Fixture::scalar("1", "3", "[2]"),
        Fixture::scalar("2", "1", "[2]"),
        Fixture::scalar("3", "4", "[2]"),
        Fixture::scalar("4", "2", "[2]"),
        Fixture::new(
            "2",
            "2",
            &["3", "2"],
            &[&["1/[2]", "sqrt([3])/[2]"], &["sqrt([3])/[2]", "[3]/[2]"]],
        ),
        Fixture::new(
            "3",
            "3",
            &["2", "3"],
            &[&["1/[2]", "-sqrt([3])/[2]"], &["-sqrt([3])/[2]", "[3]/[2]"]],
        ),
        three.alias("3", "2", &["2", "3", "1"]),
        three,
    ]
}

const S24: &str = "sqrt([2][4])";

fn e2_fixtures() -> Vec<Fixture> {
    let l = |f: Fixture| f.over("l", "1", "3").modulo(3);
    let subs: &[(&str, &str)] = &[("$s", S24)];
    let r_j = Fixture::new(
        "r_{l}",
        "j",
        &["p_{l-1}", "p_{l}"],
        &[
            &["[2]^2([2][4]+$s)/([3]^2[4])", "sqrt([2]^3)/sqrt([3][4])"],
            &["sqrt([2]^3)/sqrt([3][4])", "[2]^2([2][4]-$s)/([3]^2[4])"],
        ],
    )
    .subst(subs);
    let q_p = Fixture::new(
        "q_{l}",
        "p_{l}",
        &["k", "r_{l+1}"],
        &[
            &["([2][4]+$s)/([2][3])", "-sqrt([2][4]-$s)/([2]sqrt([3]))"],
            &["-sqrt([2][4]-$s)/([2]sqrt([3]))", "([2]^2-$s)/([2][3])"],
        ],
    )
    .subst(subs);
    let p_r = Fixture::new(
        "p_{l}",
        "r_{l}",
        &["j", "q_{l-1}"],
        &[
            &["([2][4]-$s)/([2][3])", "sqrt([2][4]-$s)/([2]sqrt([3]))"],
            &["sqrt([2][4]-$s)/([2]sqrt([3]))", "([2]^2+$s)/([2][3])"],
        ],
    )
    .subst(subs);
    vec![
        Fixture::scalar("i", "k", "[2]"),
        Fixture::scalar("j", "i", "[2]"),
        l(Fixture::new(
            "k",
            "j",
            &["i", "p_{l}"],
            &[
                &["[2]/[3]", "sqrt([2]^3)/([3]sqrt([4]))"],
                &["sqrt([2]^3)/([3]sqrt([4]))", "[2]^2/([3][4])"],
            ],
        )
        .block()),
        l(r_j.alias("k", "q_{l}", &["p_{l}", "p_{l+1}"])),
        l(r_j),
        l(q_p.alias("p_{l}", "r_{l+1}", &["j", "q_{l}"])),
        l(q_p),
        l(p_r.alias("q_{l-1}", "p_{l}", &["k", "r_{l}"])),
        l(p_r),
        l(Fixture::new(
            "r_{l+1}",
            "q_{l}",
            &["p_{l}", "p_{l+1}"],
            &[
                &["[2]([2]^2-$s)/[3]^2", "-[2]/sqrt([6])"],
                &["-[2]/sqrt([6])", "[2]([2]^2+$s)/[3]^2"],
            ],
        )
        .subst(subs)),
        l(Fixture::new(
            "p_{l}",
            "k",
            &["j", "q_{l-1}", "q_{l}"],
            &[
                &[
                    "1/[2]",
                    "sqrt([2][4]-$s)/sqrt([2][3][4])",
                    "sqrt([2][4]+$s)/sqrt([2][3][4])",
                ],
                &[
                    "sqrt([2][4]-$s)/sqrt([2][3][4])",
                    "([2][4]-$s)/([3][4])",
                    "sqrt([6])/sqrt([3][4])",
                ],
                &[
                    "sqrt([2][4]+$s)/sqrt([2][3][4])",
                    "sqrt([6])/sqrt([3][4])",
                    "([2][4]+$s)/([3][4])",
                ],
            ],
        )
        .subst(subs)),
    ]
}

fn e1_fixtures() -> Vec<Fixture> {
    let l = |f: Fixture| f.over("l", "1", "3").modulo(3);
    let subs: &[(&str, &str)] = &[
        ("$s", S24),
        ("$ap", "(-[2]^2 + I*sqrt([2][4]))/([3][4])"),
        ("$am", "(-[2]^2 - I*sqrt([2][4]))/([3][4])"),
        ("$bp", "sqrt(([2][4] + sqrt([2][4]))/([3][4]^2))"),
        ("$bm", "sqrt(([2][4] - sqrt([2][4]))/([3][4]^2))"),
    ];
    let r_j = Fixture::new(
        "r",
        "j_{l}",
        &["p/alpha", "p/alpha'"],
        &[
            &[
                "[2]^2([2][4]+$s)/([3]^2[4])",
                "conj(eps(l))sqrt([2]^3)/sqrt([3][4])",
            ],
            &[
                "eps(l)sqrt([2]^3)/sqrt([3][4])",
                "[2]^2([2][4]-$s)/([3]^2[4])",
            ],
        ],
    )
    .subst(subs);
    let j_p = Fixture::new(
        "j_{l}",
        "p",
        &["k_{l}", "r/alpha", "r/alpha'"],
        &[
            &[
                "1/[2]",
                "conj(eps(l))sqrt([2][4]+$s)/sqrt([2][3][4])",
                "eps(l)sqrt([2][4]-$s)/sqrt([2][3][4])",
            ],
            &[
                "eps(l)sqrt([2][4]+$s)/sqrt([2][3][4])",
                "([2][4]+$s)/([3][4])",
                "conj(eps(l))sqrt([6])/sqrt([3][4])",
            ],
            &[
                "conj(eps(l))sqrt([2][4]-$s)/sqrt([2][3][4])",
                "eps(l)sqrt([6])/sqrt([3][4])",
                "([2][4]-$s)/([3][4])",
            ],
        ],
    )
    .subst(subs);
    let p_r = Fixture::new(
        "p",
        "r",
        &["j_1", "j_2", "j_3", "q/beta", "q/beta'"],
        &[
            &["[3]/[4]", "$am", "$ap", "-$bp", "$bm"],
            &["$ap", "[3]/[4]", "$am", "-conj(eps(2))$bp", "eps(2)$bm"],
            &["$am", "$ap", "[3]/[4]", "-eps(2)$bp", "conj(eps(2))$bm"],
            &[
                "-$bp",
                "-eps(2)$bp",
                "-conj(eps(2))$bp",
                "([2]^2+$s)/([2][3])",
                "0",
            ],
            &[
                "$bm",
                "conj(eps(2))$bm",
                "eps(2)$bm",
                "0",
                "([2]^2-$s)/([2][3])",
            ],
        ],
    )
    .subst(subs);
    vec![
        l(Fixture::scalar("i_{l}", "k_{l}", "[2]")),
        l(Fixture::scalar("j_{l}", "i_{l}", "[2]")),
        l(Fixture::new(
            "k_{l}",
            "j_{l}",
            &["i_{l}", "p"],
            &[
                &["[2]/[3]", "sqrt([2][4])/[3]"],
                &["sqrt([2][4])/[3]", "[4]/[3]"],
            ],
        )),
        l(r_j.alias("k_{l}", "q", &["p/beta'", "p/beta"])),
        l(r_j),
        l(j_p.alias("p", "k_{l}", &["j_{l}", "q/beta'", "q/beta"])),
        l(j_p),
        Fixture::new(
            "r",
            "q",
            &[
                "p/alpha/beta",
                "p/alpha/beta'",
                "p/alpha'/beta",
                "p/alpha'/beta'",
            ],
            &[
                &["0", "0", "0", "0"],
                &["0", "[2]([2]^2-$s)/[3]^2", "-sqrt([2])/sqrt([6])", "0"],
                &["0", "-sqrt([2])/sqrt([6])", "[2]([2]^2+$s)/[3]^2", "0"],
                &["0", "0", "0", "0"],
            ],
        )
        .subst(subs),
        p_r.alias("q", "p", &["k_1", "k_3", "k_2", "r/alpha'", "r/alpha"]),
        p_r,
    ]
}

fn e5_fixtures() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = [
        ("5", "16", "[2]"),
        ("16", "9", "[2]"),
        ("10", "4", "[2]"),
        ("15", "10", "[2]"),
        ("3", "17", "[2]/[4]"),
        ("17", "8", "[2]/[4]"),
        ("11", "3", "[2]/[4]"),
        ("14", "11", "[2]/[4]"),
        ("2", "15", "[4]/[3]"),
        ("4", "14", "[4]/[3]"),
        ("8", "5", "[4]/[3]"),
        ("9", "2", "[4]/[3]"),
    ]
    .iter()
    .map(|(x, y, v)| Fixture::scalar(x, y, v))
    .collect();
    let two = |x: &str, y: &str, rows: [&str; 2], e: [&str; 3]| {
        Fixture::new(x, y, &rows, &[&[e[0], e[1]], &[e[1], e[2]]])
    };
    out.push(two(
        "14",
        "8",
        ["3", "1"],
        ["1/[2]", "sqrt([3])/sqrt([2])", "[3]"],
    ));
    let f = two("12", "7", ["2", "1"], ["1/[2]", "sqrt([3])/[2]", "[3]/[2]"]);
    out.push(f.alias("13", "6", &["2", "1"]));
    out.push(f);
    let f = two(
        "3",
        "13",
        ["8", "7"],
        ["1/[2]", "-sqrt([3])/[2]", "[3]/[2]"],
    );
    out.push(f.alias("7", "3", &["14", "13"]));
    out.push(f);
    let f = two(
        "5",
        "13",
        ["9", "8"],
        ["1/[2]", "sqrt([4])/sqrt([2]^3)", "[4]/[2]^2"],
    );
    out.push(f.alias("13", "9", &["5", "2"]));
    out.push(f.alias("7", "4", &["15", "14"]));
    out.push(f.alias("15", "7", &["4", "2"]));
    out.push(f);
    let f = two(
        "2",
        "12",
        ["7", "6"],
        ["[2]/[3]", "sqrt([2][4])/[3]", "[4]/[3]"],
    );
    out.push(f.alias("6", "2", &["13", "12"]));
    out.push(f.alias("4", "15", &["10", "7"]));
    out.push(f.alias("9", "5", &["16", "13"]));
    out.push(f);
    let f = two(
        "1",
        "14",
        ["7", "8"],
        ["[2]/[3]", "[2]sqrt([4])/[3]", "[2][4]/[3]"],
    );
    out.push(f.alias("8", "1", &["13", "14"]));
    out.push(f);
    out.push(two(
        "12",
        "6",
        ["1", "2"],
        ["[3]/[2]^3", "[4]sqrt([3])/[2]^3", "[4]^2/[2]^3"],
    ));
    let f = two(
        "1",
        "12",
        ["6", "7"],
        ["1/[6]", "sqrt([2][4])/[6]", "[2][4]/[6]"],
    );
    out.push(f.alias("6", "1", &["12", "13"]));
    out.push(f);
    let three = |x: &str, y: &str, rows: [&str; 3], e: [&str; 6]| {
        Fixture::new(
            x,
            y,
            &rows,
            &[
                &[e[0], e[1], e[2]],
                &[e[1], e[3], e[4]],
                &[e[2], e[4], e[5]],
            ],
        )
    };
    let f = three(
        "13",
        "8",
        ["5", "3", "1"],
        [
            "1/[2]",
            "1/[2]",
            "sqrt([6])/([2]sqrt([4]))",
            "1/[2]",
            "sqrt([6])/([2]sqrt([4]))",
            "[6]/([2][4])",
        ],
    );
    out.push(f.alias("14", "7", &["4", "3", "1"]));
    out.push(f);
    let f = three(
        "3",
        "14",
        ["8", "7", "11"],
        [
            "1/[2]",
            "1/sqrt([3])",
            "1/sqrt([3])",
            "[2]/[3]",
            "[2]/[3]",
            "[2]/[3]",
        ],
    );
    out.push(f.alias("8", "3", &["14", "13", "17"]));
    out.push(f);
    let f = three(
        "2",
        "13",
        ["9", "7", "6"],
        [
            "1/[2]",
            "-1/sqrt([3])",
            "sqrt([2])/sqrt([3][4])",
            "[2]/[3]",
            "-sqrt([2]^3)/([3]sqrt([4]))",
            "[2]^2/([3][4])",
        ],
    );
    out.push(f.alias("7", "2", &["15", "13", "12"]));
    out.push(f);
    let f = three(
        "1",
        "13",
        ["8", "7", "6"],
        [
            "1/[2]",
            "sqrt([4])/([2]sqrt([6]))",
            "sqrt([2]^3)/sqrt([6])",
            "[4]/([2][6])",
            "sqrt([2]^3[4])/[6]",
            "[2]^2/[6]",
        ],
    );
    out.push(f.alias("7", "1", &["14", "13", "12"]));
    out.push(f);
    out.push(three(
        "13",
        "7",
        ["2", "3", "1"],
        [
            "1/[2]",
            "sqrt([6])/sqrt([2]^3)",
            "-sqrt([3])/[2]^2",
            "[6]/[2]^2",
            "-sqrt([3][6])/sqrt([2]^5)",
            "[3]/[2]^3",
        ],
    ));
    out
}

fn e24_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    let two = |x: &str, y: &str, rows: [&str; 2], e: [&str; 3]| {
        Fixture::new(x, y, &rows, &[&[e[0], e[1]], &[e[1], e[2]]])
    };
    let three = |x: &str, y: &str, rows: [&str; 3], e: [&str; 6]| {
        Fixture::new(
            x,
            y,
            &rows,
            &[
                &[e[0], e[1], e[2]],
                &[e[1], e[3], e[4]],
                &[e[2], e[4], e[5]],
            ],
        )
    };
    let f = two(
        "3",
        "21",
        ["12", "14"],
        ["[5]/[4]", "-sqrt([3][5])/[4]", "[3]/[4]"],
    );
    out.push(f.alias("12", "3", &["21", "19"]));
    out.push(f.alias("6", "20", &["13", "11"]));
    out.push(f.alias("13", "6", &["20", "22"]));
    out.push(f);
    let f = two(
        "19",
        "12",
        ["3", "4"],
        ["1/[2]", "sqrt([3])/[2]", "[3]/[2]"],
    );
    out.push(f.alias("21", "14", &["3", "4"]));
    out.push(f.alias("20", "11", &["6", "5"]));
    out.push(f.alias("22", "13", &["6", "5"]));
    out.push(f);
    let f = two(
        "5",
        "19",
        ["11", "14"],
        ["[2]/[3]", "sqrt([2][4])/[3]", "[4]/[3]"],
    );
    out.push(f.alias("14", "5", &["22", "19"]));
    out.push(f);
    let f = two(
        "4",
        "22",
        ["14", "11"],
        ["[2]/[3]", "-sqrt([2][4])/[3]", "[4]/[3]"],
    );
    out.push(f.alias("11", "4", &["19", "22"]));
    out.push(f);
    let f = two(
        "20",
        "13",
        ["6", "5"],
        ["[5]^2/([2][9])", "-[5]sqrt([7])/([2][9])", "[7]/([2][9])"],
    );
    out.push(f.alias("21", "12", &["3", "4"]));
    out.push(f);
    let f = two(
        "4",
        "21",
        ["12", "14"],
        ["1/[4]", "[3]sqrt([5])/([4]sqrt([7]))", "[3]^2[5]/([4][7])"],
    );
    out.push(f.alias("12", "4", &["21", "19"]));
    out.push(f.alias("5", "20", &["13", "11"]));
    out.push(f.alias("13", "5", &["20", "22"]));
    out.push(f);
    out.push(three(
        "19",
        "14",
        ["3", "4", "5"],
        [
            "1/[2]",
            "sqrt([7])/([2][3])",
            "sqrt([7][10])/([3]sqrt([2][5]))",
            "[7]/([2][3]^2)",
            "[7]sqrt([10])/([3]^2sqrt([2][5]))",
            "[7][10]/([3]^2[5])",
        ],
    ));
    out.push(three(
        "22",
        "11",
        ["6", "5", "4"],
        [
            "1/[2]",
            "sqrt([7])/([2][3])",
            "-sqrt([7][10])/([3]sqrt([2][5]))",
            "[7]/([2][3]^2)",
            "-[7]sqrt([10])/([3]^2sqrt([2][5]))",
            "[7][10]/([3]^2[5])",
        ],
    ));
    let f = three(
        "19",
        "11",
        ["2", "4", "5"],
        [
            "[4]/[5]",
            "[4]sqrt([7])/([3][5])",
            "[4]sqrt([7])/([3][5])",
            "[4][7]/([3]^2[5])",
            "[4][7]/([3]^2[5])",
            "[4][7]/([3]^2[5])",
        ],
    );
    out.push(f.alias("22", "14", &["7", "4", "5"]));
    out.push(f);
    let f = three(
        "3",
        "19",
        ["10", "14", "12"],
        [
            "[4]/[5]",
            "sqrt([3])/sqrt([5])",
            "sqrt([9])/[5]",
            "[3]/[4]",
            "sqrt([3][9])/([4]sqrt([5]))",
            "[9]/([4][5])",
        ],
    );
    out.push(f.alias("14", "3", &["23", "19", "21"]));
    out.push(f.alias("6", "22", &["15", "11", "13"]));
    out.push(f.alias("11", "6", &["18", "22", "20"]));
    out.push(f);
    let f = three(
        "4",
        "19",
        ["11", "14", "12"],
        [
            "[2]/[3]",
            "sqrt([2][5])/([3]sqrt([4]))",
            "sqrt([2][9])/sqrt([4][7])",
            "[5]/([3][4])",
            "sqrt([5][9])/([4]sqrt([7]))",
            "[3][9]/([4][7])",
        ],
    );
    out.push(f.alias("14", "4", &["22", "19", "21"]));
    out.push(f.alias("5", "22", &["14", "11", "13"]));
    out.push(f.alias("11", "5", &["19", "22", "20"]));
    out.push(f);
    out
}

/// The reference matrices stored for a catalog entry. The matrices of
/// the families with two solutions describe the `plus` solution.
pub fn fixture_set(spec: GraphSpec) -> Result<Vec<Fixture>> {
    let missing = || CellforgeError::MissingFixtures(spec.to_string());
    let set = match spec.family {
        Family::A => a_fixtures(),
        Family::D if spec.n % 3 == 0 => d_fixtures(),
        Family::AStar if spec.n % 2 == 1 => astar_odd_fixtures(),
        Family::AStar => astar_even_fixtures(),
        Family::DStar if spec.n % 2 == 1 => dstar_from_astar(astar_odd_fixtures()),
        Family::DStar => dstar_from_astar(astar_even_fixtures()),
        Family::E8 => e8_fixtures(),
        Family::E8Star => e8star_fixtures(),
        Family::E2 => e2_fixtures(),
        Family::E1 => e1_fixtures(),
        Family::E5 => e5_fixtures(),
        Family::E24 => e24_fixtures(),
        Family::D | Family::E4 => return Err(missing()),
    };
    Ok(set)
}

/// Whether the stored matrices of `spec` are those of the complex
/// conjugate cell system.
pub fn conjugate_tables(spec: GraphSpec) -> bool {
    matches!(spec.family, Family::D | Family::E1)
}

/// Compares every stored reference matrix with the operators computed
/// from `cs`. References are conjugated for the `conj` variant and for the
/// families whose tables are stored conjugated (see [`conjugate_tables`]).
pub fn fixture_check(cs: &CellSystem) -> Result<FixtureReport> {
    let g = cs.graph();
    let spec = g
        .spec()
        .ok_or_else(|| CellforgeError::MissingFixtures(g.name().to_string()))?;
    if cs.variant() == Variant::Minus {
        return Err(CellforgeError::MissingFixtures(format!(
            "{spec} (variant minus)"
        )));
    }
    let conjugate = (cs.variant() == Variant::Conjugate) != conjugate_tables(spec);
    let ctx = &g.qcontext();
    let mut report = FixtureReport {
        graph: spec.to_string(),
        matrices: 0,
        max: 0.0,
        deviations: Vec::new(),
    };
    let base = base_env(spec);
    for f in fixture_set(spec)? {
        if let Some(cond) = &f.when {
            if eval_int(cond, ctx, &base)? == 0 {
                continue;
            }
        }
        for env in assignments(&f, ctx, base.clone())? {
            if let Some(dev) = check_one(cs, &f, ctx, &env, conjugate)? {
                report.matrices += 1;
                report.max = report.max.max(dev.deviation);
                report.deviations.push(dev);
            }
        }
    }
    Ok(report)
}

fn assignments(
    f: &Fixture,
    ctx: &QContext,
    base: Vec<(&'static str, i64)>,
) -> Result<Vec<Vec<(String, i64)>>> {
    let mut envs: Vec<Vec<(String, i64)>> =
        vec![base.into_iter().map(|(k, v)| (k.to_string(), v)).collect()];
    for (var, lo, hi) in &f.ranges {
        let mut next = Vec::new();
        for env in envs {
            let view = borrow_env(&env);
            let (lo, hi) = (eval_int(lo, ctx, &view)?, eval_int(hi, ctx, &view)?);
            for v in lo..=hi {
                let mut e = env.clone();
                e.push((var.clone(), v));
                next.push(e);
            }
        }
        envs = next;
    }
    Ok(envs)
}

fn borrow_env(env: &[(String, i64)]) -> Vec<(&str, i64)> {
    env.iter().map(|(k, v)| (k.as_str(), *v)).collect()
}

fn check_one(
    cs: &CellSystem,
    f: &Fixture,
    ctx: &QContext,
    env: &[(String, i64)],
    conjugate: bool,
) -> Result<Option<FixtureDeviation>> {
    let g = cs.graph();
    let env = borrow_env(env);
    let render = |t: &str| render_template(t, ctx, &env, f.modulus);
    let (xl, yl) = (render(&f.x)?, render(&f.y)?);
    let (Some(x), Some(y)) = (g.vertex_by_label(&xl), g.vertex_by_label(&yl)) else {
        return Ok(None);
    };
    let matrix = format!("U^({xl},{yl})");
    let u = match hecke_operator(cs, x, y) {
        Ok(u) => u,
        Err(CellforgeError::NoPath { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let value = |i: usize, j: usize| -> Result<Complex64> {
        let v = eval(&f.entries[i][j], ctx, &env)?;
        Ok(if conjugate { v.conj() } else { v })
    };
    let mut dev = FixtureDeviation {
        fixture: f.name(),
        matrix,
        deviation: 0.0,
        worst: (String::new(), String::new()),
        reference_residual: if f.block {
            None
        } else {
            Some(reference_residual(f, ctx, &env)?)
        },
    };
    let mut record = |d: f64, r: String, c: String| {
        if !(d <= dev.deviation) || dev.worst.0.is_empty() {
            dev.deviation = if d.is_nan() {
                f64::INFINITY
            } else {
                d.max(dev.deviation)
            };
            dev.worst = (r, c);
        }
    };
    if f.rows.is_empty() {
        let labels = u.row_labels(g);
        if u.dim() != 1 {
            record(
                f64::INFINITY,
                labels.join(" "),
                format!("dimension {}", u.dim()),
            );
        } else {
            let d = (u.matrix[(0, 0)] - value(0, 0)?).norm();
            record(d, labels[0].clone(), labels[0].clone());
        }
        return Ok(Some(dev));
    }
    let rows: Vec<String> = f.rows.iter().map(|r| render(r)).collect::<Result<_>>()?;
    let listed: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| u.row(g, r).map(|p| (i, p)))
        .collect();
    for &(i, p) in &listed {
        for &(j, q) in &listed {
            let d = (u.matrix[(p, q)] - value(i, j)?).norm();
            record(d, rows[i].clone(), rows[j].clone());
        }
    }
    if f.block {
        return Ok(Some(dev));
    }
    let labels = u.row_labels(g);
    for p in unlisted(&u, &listed) {
        let d = (0..u.dim())
            .map(|q| u.matrix[(p, q)].norm().max(u.matrix[(q, p)].norm()))
            .fold(0.0, f64::max);
        record(d, labels[p].clone(), "*".into());
    }
    Ok(Some(dev))
}

fn reference_residual(f: &Fixture, ctx: &QContext, env: &[(&str, i64)]) -> Result<f64> {
    let n = f.entries.len();
    let mut e = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            e[(i, j)] = eval(&f.entries[i][j], ctx, env)?;
        }
    }
    let two = Complex64::new(ctx.qint(2), 0.0);
    let r = &e * &e - e.map(|v| v * two);
    Ok(r.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

fn unlisted(u: &HeckeOperator, listed: &[(usize, usize)]) -> Vec<usize> {
    (0..u.dim())
        .filter(|p| !listed.iter().any(|&(_, q)| q == *p))
        .collect()
}
