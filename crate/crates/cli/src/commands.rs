use formap::curve::{solve_1mm_curve, solve_2mm_curve, OneMatrixModel, Series, TwoMatrixModel};
use formap::loops::check_loop_equation;
use formap::series::format_rational;
use formap::toprec::TopologicalRecursion;
use formap::wick::{map_census, Method, WickEngine};

use crate::error::CliError;
use crate::model::ModelFile;
use crate::report::{BudgetUsage, CensusLine, CoefficientMismatch, Comparison, GenusSeries, ModelSummary, Report};

const DEFAULT_MAX_L: usize = 3;
const DEFAULT_CURVE_ORDER: i64 = 6;
const DEFAULT_TOPREC_ORDER: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Wick,
    ClosedForm,
    Toprec,
}

impl Route {
    fn name(self) -> &'static str {
        match self {
            Route::Wick => "wick",
            Route::ClosedForm => "closed-form",
            Route::Toprec => "toprec",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WickMethod {
    Auto,
    Sweep,
    Contract,
}

impl From<WickMethod> for Method {
    fn from(m: WickMethod) -> Self {
        match m {
            WickMethod::Auto => Method::Auto,
            WickMethod::Sweep => Method::Sweep,
            WickMethod::Contract => Method::Contract,
        }
    }
}

/// Settings shared by every command after flags override the model file.
pub struct Run {
    pub model: ModelFile,
    pub pairing_budget: u64,
}

impl Run {
    pub fn new(model: ModelFile, budget_flag: Option<u64>) -> Self {
        let pairing_budget = budget_flag.unwrap_or(model.budgets.pairings);
        Run { model, pairing_budget }
    }

    fn check_order(&self, what: &str, order: i64) -> Result<(), CliError> {
        if order > self.model.budgets.max_order {
            return Err(CliError::Budget(format!("order budget exceeded: {what} {order} is above {}", self.model.budgets.max_order)));
        }
        Ok(())
    }

    fn max_l(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let l = flag.or(self.model.orders.max_l).unwrap_or(DEFAULT_MAX_L);
        self.check_order("max_l", l as i64)?;
        Ok(l)
    }

    fn engine(&self, method: Method) -> Result<WickEngine, CliError> {
        Ok(WickEngine::new(self.model.gaussian.clone(), self.model.potential.clone())?
            .with_method(method)
            .with_budget(self.pairing_budget))
    }

    fn report(&self, command: &str) -> Report {
        let g = &self.model.gaussian;
        let c = g.c_matrix().iter().map(|r| r.iter().map(format_rational).collect()).collect();
        let potential = match self.model.potential.describe() {
            d if d.is_empty() => "0".to_string(),
            d => d,
        };
        let model = ModelSummary { p: g.p(), c, potential };
        let budget = BudgetUsage { pairings_swept: 0, pairing_budget: self.pairing_budget, max_order: self.model.budgets.max_order };
        Report::new(command, model, budget)
    }

    fn curve_model(&self) -> Result<CurveModel, CliError> {
        match self.model.gaussian.p() {
            1 => Ok(CurveModel::One(OneMatrixModel::from_model(&self.model.gaussian, &self.model.potential)?)),
            2 => Ok(CurveModel::Two(TwoMatrixModel::from_model(&self.model.gaussian, &self.model.potential)?)),
            p => Err(CliError::Engine(formap::Error::Unsupported(format!("no spectral curve for p = {p}")))),
        }
    }
}

enum CurveModel {
    One(OneMatrixModel),
    Two(TwoMatrixModel),
}

fn genus_series(route: Route, genus: u32, f: &Series) -> GenusSeries {
    GenusSeries { route: route.name().into(), genus, series: f.to_string(), record: f.to_record() }
}

pub fn enumerate(run: &Run, max_l: Option<usize>, method: WickMethod, census: bool) -> Result<Report, CliError> {
    let max_l = run.max_l(max_l)?;
    let mut e = run.engine(method.into())?;
    let table = e.compute_f(max_l)?;
    let mut r = run.report("enumerate");
    r.table = Some(table.to_record());
    if census {
        for l in 1..=max_l {
            for c in map_census(&e, l, true, run.pairing_budget)? {
                r.census.push(CensusLine {
                    l,
                    genus: (2 - c.euler_characteristic) / 2,
                    automorphisms: c.automorphisms,
                    weight: c.weight_monomial(&e),
                });
            }
        }
    }
    r.budget.pairings_swept = e.pairings_swept();
    Ok(r)
}

/// All words of length `0..=len` over the colors `1..=p`.
pub fn all_words(p: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let next: Vec<Vec<u8>> = layer
            .iter()
            .flat_map(|w: &Vec<u8>| {
                (1..=p).map(move |c| {
                    let mut x = w.clone();
                    x.push(c);
                    x
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn check_loops(run: &Run, words: Option<Vec<Vec<u8>>>, word_len: usize, order: i64) -> Result<Report, CliError> {
    run.check_order("order", order)?;
    let p = run.model.gaussian.p() as u8;
    let words = words.unwrap_or_else(|| all_words(p, word_len));
    let mut e = run.engine(Method::Auto)?;
    let mut r = run.report("check-loops");
    for k in 1..=p {
        for g in &words {
            let v = check_loop_equation(&mut e, k, g, order)?;
            r.passed &= v.passed;
            r.loops.push(v);
        }
    }
    r.budget.pairings_swept = e.pairings_swept();
    Ok(r)
}

fn wick_series(run: &Run, max_l: usize, genera: &[u32], r: &mut Report) -> Result<Vec<(u32, Series)>, CliError> {
    let mut e = run.engine(Method::Auto)?;
    let table = e.compute_f(max_l)?;
    r.budget.pairings_swept += e.pairings_swept();
    let mut out = Vec::new();
    for &g in genera {
        out.push((g, table.genus_series(g as usize)?.neg()));
    }
    Ok(out)
}

fn closed_form_series(run: &Run, order: i64, genera: &[u32]) -> Result<Vec<(u32, Series)>, CliError> {
    let mut out = Vec::new();
    match run.curve_model()? {
        CurveModel::One(m) => {
            let curve = solve_1mm_curve(&m, order)?;
            for &g in genera {
                let f = match g {
                    0 => curve.f0()?,
                    1 => curve.f1()?,
                    2 => curve.f2()?,
                    _ => return Err(unsupported(format!("no closed form for genus {g}"))),
                };
                out.push((g, f));
            }
        }
        CurveModel::Two(m) => {
            let curve = solve_2mm_curve(&m, order)?;
            for &g in genera {
                let f = match g {
                    0 => curve.f0()?,
                    1 => curve.f1()?,
                    _ => return Err(unsupported(format!("no two-matrix closed form for genus {g}"))),
                };
                out.push((g, f));
            }
        }
    }
    Ok(out)
}

fn toprec_series(run: &Run, order: i64, genera: &[u32]) -> Result<Vec<(u32, Series)>, CliError> {
    if let Some(g) = genera.iter().find(|&&g| g < 2) {
        return Err(unsupported(format!("the recursion route gives F^(g) for g >= 2, not g = {g}")));
    }
    let mut tr = match run.curve_model()? {
        CurveModel::One(m) => TopologicalRecursion::zhukovsky(&solve_1mm_curve(&m, order)?)?,
        CurveModel::Two(m) => TopologicalRecursion::two_matrix(&solve_2mm_curve(&m, order)?)?,
    };
    genera.iter().map(|&g| Ok((g, tr.free_energy(g)?))).collect()
}

fn unsupported(msg: String) -> CliError {
    CliError::Engine(formap::Error::Unsupported(msg))
}

pub fn free_energy(run: &Run, route: Route, genera: &[u32], order: Option<i64>, max_l: Option<usize>) -> Result<Report, CliError> {
    let mut r = run.report("free-energy");
    let series = match route {
        Route::Wick => {
            let max_l = run.max_l(max_l)?;
            wick_series(run, max_l, genera, &mut r)?
        }
        Route::ClosedForm => {
            let order = order.or(run.model.orders.curve).unwrap_or(DEFAULT_CURVE_ORDER);
            run.check_order("order", order)?;
            closed_form_series(run, order, genera)?
        }
        Route::Toprec => {
            let order = order.or(run.model.orders.toprec).unwrap_or(DEFAULT_TOPREC_ORDER);
            run.check_order("order", order)?;
            toprec_series(run, order, genera)?
        }
    };
    r.free_energies = series.iter().map(|(g, f)| genus_series(route, *g, f)).collect();
    Ok(r)
}

fn compare(genus: u32, left: &GenusSeries, a: &Series, right: &GenusSeries, b: &Series) -> Comparison {
    let from = 2 - 2 * genus as i64;
    let to = a.order().min(b.order()) - 1;
    let first_mismatch = (from..=to).find(|&k| a.coeff(k) != b.coeff(k)).map(|k| CoefficientMismatch {
        power: k,
        left: format_rational(&a.coeff(k)),
        right: format_rational(&b.coeff(k)),
    });
    Comparison {
        genus,
        left: left.route.clone(),
        right: right.route.clone(),
        from,
        to,
        passed: first_mismatch.is_none(),
        first_mismatch,
    }
}

pub fn crosscheck(run: &Run, max_l: Option<usize>, order: Option<i64>) -> Result<Report, CliError> {
    if !run.model.potential.is_numeric() {
        return Err(CliError::Usage("crosscheck needs numeric couplings".into()));
    }
    let max_l = run.max_l(max_l)?;
    let mut r = run.report("crosscheck");
    let mut results: Vec<(Route, u32, Series)> = Vec::new();
    for (g, f) in wick_series(run, max_l, &[0, 1, 2], &mut r)? {
        results.push((Route::Wick, g, f));
    }
    let fixed = order.or(run.model.orders.curve);
    match run.curve_model() {
        Ok(m) => {
            let mut genera = vec![0, 1];
            if matches!(m, CurveModel::One(_)) {
                genera.push(2);
            }
            for g in genera {
                let o = fixed.unwrap_or((max_l as i64 + 3 - 2 * g as i64).max(1));
                run.check_order("order", o)?;
                for (g, f) in closed_form_series(run, o, &[g])? {
                    results.push((Route::ClosedForm, g, f));
                }
            }
            let toprec_order = match (&m, run.model.orders.toprec) {
                (_, Some(o)) => Some(o),
                (CurveModel::One(_), None) => Some((max_l as i64 - 1).clamp(1, DEFAULT_TOPREC_ORDER)),
                (CurveModel::Two(_), None) => None,
            };
            match toprec_order {
                Some(o) => {
                    run.check_order("order", o)?;
                    match toprec_series(run, o, &[2]) {
                        Ok(v) => results.extend(v.into_iter().map(|(g, f)| (Route::Toprec, g, f))),
                        Err(CliError::Engine(formap::Error::Unsupported(why))) => r.notes.push(format!("toprec skipped: {why}")),
                        Err(e) => return Err(e),
                    }
                }
                None => r.notes.push("toprec skipped for two-matrix models unless orders.toprec is set".into()),
            }
        }
        Err(CliError::Engine(formap::Error::Unsupported(why))) => r.notes.push(format!("closed-form and toprec skipped: {why}")),
        Err(e) => return Err(e),
    }
    r.free_energies = results.iter().map(|(route, g, f)| genus_series(*route, *g, f)).collect();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            if results[i].1 == results[j].1 {
                let c = compare(results[i].1, &r.free_energies[i], &results[i].2, &r.free_energies[j], &results[j].2);
                r.passed &= c.passed;
                r.crosscheck.push(c);
            }
        }
    }
    Ok(r)
}
