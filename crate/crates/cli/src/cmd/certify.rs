use std::path::PathBuf;

use axiblow::certify::{
    base_sign_tests, homogeneous_swirl_test, planar_euler_limit_test, rectangle_flowline_test, route_proposition,
    sector_integral_test, singular_flowline_test, theta_independence_test, BaseSignOptions, CertificateReport,
    CertifierKind, CertifyError, PlanarEulerOptions, Rectangle, RectangleOptions, Route, SectorOptions, SectorSpec,
    SingularOptions, ThetaOptions, Verdict,
};
use axiblow::profile::{HomogeneityOptions, SelfSimilarAnsatz};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::validate::load_ansatz;
use super::VariantArg;
use crate::output::Output;
use crate::plot::emit_plotdata;
use crate::{existing, read_text, CliError, EXIT_HYPOTHESES_NOT_MET, EXIT_OK};

const ALL: [CertifierKind; 7] = [
    CertifierKind::HomogeneousSwirl,
    CertifierKind::ThetaIndependence,
    CertifierKind::SingularFlowline,
    CertifierKind::SectorIntegral,
    CertifierKind::RectangleFlowline,
    CertifierKind::BaseSign,
    CertifierKind::PlanarEuler,
];

/// Per-certifier parameters, read from `--options` and frozen inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifySettings {
    pub sector: SectorSpec,
    pub sector_options: SectorOptions,
    /// Required by the rectangle certifier, which is never auto-routed.
    pub rectangle: Option<Rectangle>,
    pub rectangle_options: RectangleOptions,
    /// Strip height; half the smaller grid extent when absent.
    pub singular_l0: Option<f64>,
    pub singular_options: SingularOptions,
    pub base_sign: BaseSignOptions,
    pub theta: ThetaOptions,
    pub homogeneity: HomogeneityOptions,
    pub planar_euler: PlanarEulerOptions,
}

impl Default for CertifySettings {
    fn default() -> Self {
        Self {
            sector: SectorSpec::new(0.3, 1.2, 0.0, None),
            sector_options: SectorOptions::default(),
            rectangle: None,
            rectangle_options: RectangleOptions::default(),
            singular_l0: None,
            singular_options: SingularOptions::default(),
            base_sign: BaseSignOptions::default(),
            theta: ThetaOptions::default(),
            homogeneity: HomogeneityOptions::default(),
            planar_euler: PlanarEulerOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyArgs {
    #[arg(long)]
    pub ansatz: PathBuf,
    /// `auto`, or a comma list of certifiers (`sector-integral`, ...) or
    /// proposition slugs (`no-sector-maximum`, ...).
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    pub prop: Vec<String>,
    #[arg(long, value_enum, default_value_t = VariantArg::Lhsc2)]
    pub variant: VariantArg,
    /// JSON file of certifier parameters; its content is frozen into the
    /// run configuration.
    #[arg(long)]
    #[serde(skip)]
    pub options: Option<PathBuf>,
    #[arg(skip)]
    #[serde(default)]
    pub settings: CertifySettings,
}

fn kind_name(k: CertifierKind) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn parse_kind(s: &str) -> Option<CertifierKind> {
    ALL.into_iter().find(|&k| kind_name(k) == s || k.proposition().slug() == s)
}

impl CertifyArgs {
    pub(crate) fn resolve(&mut self) -> Result<(), CliError> {
        self.ansatz = existing("ansatz", &self.ansatz)?;
        if let Some(p) = self.options.take() {
            let p = existing("options", &p)?;
            self.settings = serde_json::from_str(&read_text("options", &p)?).map_err(|e| CliError::input("options", e))?;
        }
        if self.prop.is_empty() {
            return Err(CliError::input("prop", "empty list"));
        }
        let auto = self.prop.iter().any(|p| p == "auto");
        if auto && self.prop.len() > 1 {
            return Err(CliError::input("prop", "'auto' cannot be combined with named certifiers"));
        }
        if !auto {
            for p in &self.prop {
                if parse_kind(p).is_none() {
                    let known: Vec<String> = ALL.iter().map(|&k| kind_name(k)).collect();
                    return Err(CliError::input("prop", format!("unknown certifier '{p}', expected auto or one of {known:?}")));
                }
            }
        }
        if let Some(l0) = self.settings.singular_l0 {
            if !(l0 > 0.0 && l0.is_finite()) {
                return Err(CliError::input("options.singular_l0", format!("must be positive, got {l0}")));
            }
        }
        Ok(())
    }
}

fn run_one(kind: CertifierKind, a: &SelfSimilarAnsatz, s: &CertifySettings) -> Result<CertificateReport, CliError> {
    let field = |f: &str| format!("{}: options.{f}", kind_name(kind));
    let err = |e: CertifyError| CliError::Input(format!("{}: {e}", kind_name(kind)));
    match kind {
        CertifierKind::HomogeneousSwirl => homogeneous_swirl_test(a, None, &s.homogeneity).map_err(err),
        CertifierKind::ThetaIndependence => theta_independence_test(a, &s.theta).map_err(err),
        CertifierKind::SingularFlowline => {
            let l0 = match s.singular_l0 {
                Some(l) => l,
                None => {
                    let g = s
                        .singular_options
                        .grid
                        .or_else(|| a.grid())
                        .ok_or_else(|| CliError::Input(format!("{} is required for analytic profiles", field("singular_l0"))))?;
                    0.5 * g.max1().min(g.max2())
                }
            };
            singular_flowline_test(a, l0, &s.singular_options).map_err(err)
        }
        CertifierKind::SectorIntegral => sector_integral_test(a, &s.sector, &s.sector_options).map_err(err),
        CertifierKind::RectangleFlowline => {
            let rect = s
                .rectangle
                .ok_or_else(|| CliError::Input(format!("{} is required", field("rectangle"))))?;
            rectangle_flowline_test(a, &rect, &s.rectangle_options).map_err(err)
        }
        CertifierKind::BaseSign => base_sign_tests(a, &s.base_sign).map_err(err),
        CertifierKind::PlanarEuler => planar_euler_limit_test(a, &s.planar_euler).map_err(err),
    }
}

/// Runs independent certifiers on up to `threads` workers; results keep
/// the requested order.
fn run_all(
    kinds: &[CertifierKind],
    a: &SelfSimilarAnsatz,
    s: &CertifySettings,
    threads: usize,
) -> Vec<Result<CertificateReport, CliError>> {
    let mut out = Vec::with_capacity(kinds.len());
    for chunk in kinds.chunks(threads.max(1)) {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk.iter().map(|&k| scope.spawn(move || run_one(k, a, s))).collect();
            for h in handles {
                out.push(h.join().unwrap_or_else(|_| Err(CliError::Output("certifier thread panicked".into()))));
            }
        });
    }
    out
}

pub fn run(a: &CertifyArgs, out: &Output, threads: usize) -> Result<i32, CliError> {
    let ansatz = load_ansatz(&a.ansatz)?;
    let (route, kinds): (Option<Route>, Vec<CertifierKind>) = if a.prop == ["auto"] {
        let r = route_proposition(&ansatz, a.variant.into());
        let k = r.certifiers.clone();
        (Some(r), k)
    } else {
        (None, a.prop.iter().filter_map(|p| parse_kind(p)).collect())
    };
    let mut reports = Vec::new();
    for r in run_all(&kinds, &ansatz, &a.settings, threads) {
        reports.push(r?);
    }
    let mut plots = Vec::new();
    for r in &reports {
        for p in emit_plotdata(r, out, r.proposition.slug())? {
            plots.push(p.file_name().expect("file").to_string_lossy().into_owned());
        }
    }
    let code = if reports.iter().all(|r| r.verdict == Verdict::HypothesesNotMet) {
        EXIT_HYPOTHESES_NOT_MET
    } else {
        EXIT_OK
    };
    let summary: Vec<_> = reports
        .iter()
        .map(|r| json!({ "proposition": r.proposition, "verdict": r.verdict }))
        .collect();
    let report = json!({
        "ansatz": a.ansatz,
        "variant": a.variant,
        "route": route,
        "summary": summary,
        "reports": reports,
        "plotdata": plots,
        "exit_code": code,
    });
    out.write_json("certify.json", &report)?;
    Ok(code)
}
