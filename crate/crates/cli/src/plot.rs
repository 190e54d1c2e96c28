//! SVG figures rendered from the CSVs of a run directory.

use plotters::prelude::*;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("missing input: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("{file}: {reason}")]
    Input { file: String, reason: String },
    #[error("drawing {0}")]
    Draw(String),
}

/// Header and rows of a CSV; cells kept as text.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self, PlotError> {
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(path).map_err(|e| PlotError::Input {
            file: name.clone(),
            reason: e.to_string(),
        })?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or(PlotError::Input {
                file: name,
                reason: "empty file".into(),
            })?
            .split(',')
            .map(str::to_string)
            .collect();
        Ok(Self {
            header,
            rows: lines
                .filter(|l| !l.is_empty())
                .map(|l| l.split(',').map(str::to_string).collect())
                .collect(),
        })
    }

    fn col(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(k) = self.col(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| r.get(k).and_then(|c| c.parse().ok()).unwrap_or(f64::NAN))
            .collect()
    }

    pub fn text(&self, name: &str) -> Vec<String> {
        let Some(k) = self.col(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| r.get(k).cloned().unwrap_or_default())
            .collect()
    }
}

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
    dashed: bool,
    color: usize,
}

fn color(k: usize) -> RGBColor {
    const C: [RGBColor; 8] = [
        RGBColor(31, 119, 180),
        RGBColor(214, 39, 40),
        RGBColor(44, 160, 44),
        RGBColor(148, 103, 189),
        RGBColor(255, 127, 14),
        RGBColor(140, 86, 75),
        RGBColor(23, 190, 207),
        RGBColor(127, 127, 127),
    ];
    C[k % C.len()]
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
            (a.min(x), b.max(x))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * hi.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn chart(path: &Path, title: &str, x: &str, y: &str, curves: &[Curve]) -> Result<(), PlotError> {
    let err = |e: &dyn std::fmt::Display| PlotError::Draw(format!("{}: {e}", path.display()));
    let (x0, x1) = range(curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)));
    let (y0, y1) = range(curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)));
    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(&e))?;
    let mut ch = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(80)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| err(&e))?;
    ch.configure_mesh()
        .x_desc(x)
        .y_desc(y)
        .draw()
        .map_err(|e| err(&e))?;
    for c in curves {
        let col = color(c.color);
        let pts = c.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite());
        let anno = if c.dashed {
            ch.draw_series(DashedLineSeries::new(pts, 6, 4, col.stroke_width(2)))
        } else {
            ch.draw_series(LineSeries::new(pts, col.stroke_width(2)))
        }
        .map_err(|e| err(&e))?;
        if !c.label.is_empty() {
            anno.label(c.label.clone()).legend(move |(a, b)| {
                PathElement::new(vec![(a, b), (a + 20, b)], col.stroke_width(2))
            });
        }
    }
    ch.configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| err(&e))?;
    root.present().map_err(|e| err(&e))?;
    Ok(())
}

/// Group (x, y) points by the value of a key column, in numeric key order.
fn by_key(keys: &[String], x: &[f64], y: &[f64]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut m: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for k in 0..keys.len() {
        m.entry(keys[k].clone()).or_default().push((x[k], y[k]));
    }
    let mut v: Vec<_> = m.into_iter().collect();
    v.sort_by(|a, b| {
        let key = |s: &str| s.parse::<f64>().unwrap_or(f64::INFINITY);
        key(&a.0).total_cmp(&key(&b.0))
    });
    v
}

fn lookup(groups: Vec<(String, Vec<(f64, f64)>)>, key: &str) -> Vec<(f64, f64)> {
    groups.into_iter().find(|g| g.0 == key).map(|g| g.1).unwrap_or_default()
}

fn short(v: &str) -> String {
    v.parse::<f64>().map(|x| format!("{x}")).unwrap_or_else(|_| v.to_string())
}

fn flux_plot(dir: &Path, out: &Path) -> Result<(), PlotError> {
    let t = Table::read(&dir.join("flux.csv"))?;
    let (tt, f, b) = (t.column("T"), t.column("F"), t.column("bound"));
    let r = t.text("R");
    let mut curves = Vec::new();
    for (k, (rad, pts)) in by_key(&r, &tt, &f).into_iter().enumerate() {
        let bound = lookup(by_key(&r, &tt, &b), &rad);
        curves.push(Curve {
            label: format!("F, R = {}", short(&rad)),
            points: pts,
            dashed: false,
            color: k,
        });
        curves.push(Curve {
            label: String::new(),
            points: bound,
            dashed: true,
            color: k,
        });
    }
    chart(out, "integrated flux F(R,T) and bound (dashed)", "T", "F", &curves)
}

fn dissipation_plot(dir: &Path, out: &Path) -> Result<(), PlotError> {
    let t = Table::read(&dir.join("dissipation.csv"))?;
    let kinds = t.text("bound_kind");
    let pick = ["dissip1", "dissip2", "dissip3", "dissip0"]
        .into_iter()
        .find(|k| kinds.iter().any(|x| x == k))
        .unwrap_or("dissip0");
    let ylabel = match pick {
        "dissip1" => "D(R,T)/sqrt(T)",
        "dissip2" => "(log T/T) D(R,T)",
        "dissip3" => "D(R,T)/T",
        _ => "D(R,T)",
    };
    let idx: Vec<usize> = (0..kinds.len()).filter(|&k| kinds[k] == pick).collect();
    let sel = |c: Vec<f64>| idx.iter().map(|&k| c[k]).collect::<Vec<_>>();
    let rr: Vec<String> = idx.iter().map(|&k| t.text("R")[k].clone()).collect();
    let (tt, d, b) = (sel(t.column("T")), sel(t.column("D")), sel(t.column("bound")));
    let mut curves = Vec::new();
    for (k, (rad, pts)) in by_key(&rr, &tt, &d).into_iter().enumerate() {
        let bound = lookup(by_key(&rr, &tt, &b), &rad);
        curves.push(Curve {
            label: format!("R = {}", short(&rad)),
            points: pts,
            dashed: false,
            color: k,
        });
        curves.push(Curve {
            label: String::new(),
            points: bound,
            dashed: true,
            color: k,
        });
    }
    chart(out, &format!("{pick}: {ylabel} and bound (dashed)"), "T", ylabel, &curves)
}

fn jt_plot(dir: &Path, out: &Path) -> Result<(), PlotError> {
    let t = Table::read(&dir.join("jt.csv"))?;
    let keys = t.text("T");
    let curves = by_key(&keys, &t.column("r"), &t.column("sparsity_integral"))
        .into_iter()
        .enumerate()
        .map(|(k, (tk, pts))| Curve {
            label: format!("T = {}", short(&tk)),
            points: pts,
            dashed: false,
            color: k,
        })
        .collect::<Vec<_>>();
    chart(
        out,
        "sparsity of J_T: running integral of 1_J(r)/r^(N-1)",
        "R",
        "integral up to R",
        &curves,
    )
}

fn kinks_plot(dir: &Path, out: &Path) -> Result<(), PlotError> {
    let t = Table::read(&dir.join("kinks.csv"))?;
    let pts = t
        .column("t")
        .into_iter()
        .zip(t.column("count"))
        .map(|(s, c)| (s.sqrt(), c))
        .collect();
    chart(
        out,
        "kink count against sqrt(t)",
        "sqrt(t)",
        "count",
        &[Curve {
            label: "census".into(),
            points: pts,
            dashed: false,
            color: 0,
        }],
    )
}

fn hn_files(dir: &Path) -> Vec<(u32, PathBuf)> {
    let mut v: Vec<(u32, PathBuf)> = std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .filter_map(|e| {
            let name = e.file_name().to_string_lossy().into_owned();
            let n = name.strip_prefix("hn_N")?.strip_suffix(".csv")?.parse().ok()?;
            Some((n, e.path()))
        })
        .collect();
    v.sort();
    v
}

fn hn_plot(files: &[(u32, PathBuf)], out: &Path) -> Result<(), PlotError> {
    let mut curves = Vec::new();
    for (k, (n, path)) in files.iter().enumerate() {
        let t = Table::read(path)?;
        let method = t.text("method");
        let (r, h) = (t.column("r"), t.column("h"));
        let pick = if method.iter().any(|m| m == "bessel") {
            "bessel"
        } else {
            "ode"
        };
        let pts: Vec<(f64, f64)> = (0..r.len())
            .filter(|&i| method[i] == pick)
            .map(|i| (r[i].log10(), h[i].log10()))
            .collect();
        if *n == 3 {
            curves.push(Curve {
                label: "1 + 1/r".into(),
                points: pts
                    .iter()
                    .map(|(x, _)| (*x, (1.0 + 10f64.powf(-x)).log10()))
                    .collect(),
                dashed: true,
                color: 7,
            });
        }
        curves.push(Curve {
            label: format!("h_{n}"),
            points: pts,
            dashed: false,
            color: k,
        });
    }
    chart(out, "h_N(r), log-log", "log10 r", "log10 h_N", &curves)
}

fn vort_plot(dir: &Path, out: &Path) -> Result<(), PlotError> {
    let t = Table::read(&dir.join("bounds.csv"))?;
    let r = t.text("R");
    let tt = t.column("t");
    let mut curves = Vec::new();
    for (k, (rad, pts)) in by_key(&r, &tt, &t.column("lhs")).into_iter().enumerate() {
        let rhs = lookup(by_key(&r, &tt, &t.column("rhs")), &rad);
        curves.push(Curve {
            label: format!("R = {}", short(&rad)),
            points: pts,
            dashed: false,
            color: k,
        });
        curves.push(Curve {
            label: String::new(),
            points: rhs,
            dashed: true,
            color: k,
        });
    }
    chart(
        out,
        "enstrophy dissipation on [-R, R] and bound (dashed)",
        "t",
        "dissipation integral",
        &curves,
    )
}

/// Render every figure the directory's CSVs support into `<dir>/plots`.
/// Returns the written paths relative to `dir`.
pub fn emit_plots(dir: &Path) -> Result<Vec<String>, PlotError> {
    let has = |f: &str| dir.join(f).is_file();
    let hn = hn_files(dir);
    let vorticity = has("bounds.csv") || has("profiles.csv");
    let hn_only = !hn.is_empty() && !has("flux.csv") && !has("dissipation.csv") && !vorticity;
    let required: &[&str] = if vorticity {
        &["bounds.csv", "profiles.csv"]
    } else if hn_only {
        &[]
    } else {
        &["flux.csv", "dissipation.csv"]
    };
    let missing: Vec<String> = required
        .iter()
        .filter(|f| !has(f))
        .map(|f| f.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(PlotError::Missing(missing));
    }
    let plots = dir.join("plots");
    std::fs::create_dir_all(&plots).map_err(|e| PlotError::Draw(e.to_string()))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&Path) -> Result<(), PlotError>| {
        f(&plots.join(name))?;
        written.push(format!("plots/{name}"));
        Ok::<(), PlotError>(())
    };
    if vorticity {
        emit("enstrophy_dissipation.svg", &|p| vort_plot(dir, p))?;
    } else if !hn_only {
        emit("flux.svg", &|p| flux_plot(dir, p))?;
        emit("dissipation.svg", &|p| dissipation_plot(dir, p))?;
        if has("jt.csv") {
            emit("jt.svg", &|p| jt_plot(dir, p))?;
        }
        if has("kinks.csv") {
            emit("kinks.svg", &|p| kinks_plot(dir, p))?;
        }
    }
    if !hn.is_empty() {
        emit("hn.svg", &|p| hn_plot(&hn, p))?;
    }
    Ok(written)
}
