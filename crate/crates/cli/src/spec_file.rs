//! Line oriented `key = value` kernel spec documents; the grammar is
//! described in `docs/kernel-spec.md`.

use std::collections::HashMap;
use std::path::Path;

use pdi_core::combinat::SubsetIndex;
use pdi_core::kernels::{
    preset, BernsteinAtom, BernsteinSpecK, CmFunctionSpec, CmKind, ComponentCnd, FaceTerm, KroneckerFactor,
};
use pdi_core::PdiKernelSpec;

use crate::{CliError, CliResult};

const REPEATABLE: [&str; 3] = ["atom", "face", "psi_atom"];

#[derive(Debug, Default)]
struct Node {
    values: HashMap<String, Vec<(String, usize)>>,
    children: Vec<(String, Node)>,
    first_line: usize,
}

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("kernel spec line {line}: {msg}"))
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .split('.')
            .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
}

impl Node {
    fn insert(&mut self, path: &[&str], value: String, line: usize) -> CliResult<()> {
        if self.first_line == 0 {
            self.first_line = line;
        }
        match path {
            [key] => {
                let slot = self.values.entry(key.to_string()).or_default();
                if !slot.is_empty() && !REPEATABLE.contains(key) {
                    return Err(err(line, format!("duplicate key '{key}' (first set on line {})", slot[0].1)));
                }
                slot.push((value, line));
                Ok(())
            }
            ["factor", id, rest @ ..] if !rest.is_empty() => {
                let pos = match self.children.iter().position(|(c, _)| c == id) {
                    Some(p) => p,
                    None => {
                        self.children.push((id.to_string(), Node::default()));
                        self.children.len() - 1
                    }
                };
                self.children[pos].1.insert(rest, value, line)
            }
            _ => Err(err(line, format!("unexpected key '{}'", path.join(".")))),
        }
    }

    fn one(&self, key: &str) -> Option<(&str, usize)> {
        self.values.get(key).map(|v| (v[0].0.as_str(), v[0].1))
    }

    fn required(&self, key: &str) -> CliResult<(&str, usize)> {
        self.one(key).ok_or_else(|| err(self.first_line, format!("missing required key '{key}'")))
    }

    fn all(&self, key: &str) -> &[(String, usize)] {
        self.values.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    fn allow_only(&self, allowed: &[&str], variant: &str) -> CliResult<()> {
        let mut keys: Vec<(&String, usize)> = self.values.iter().map(|(k, v)| (k, v[0].1)).collect();
        keys.sort_by_key(|&(_, l)| l);
        for (k, line) in keys {
            if !allowed.contains(&k.as_str()) {
                return Err(err(line, format!("key '{k}' is not used by variant {variant}")));
            }
        }
        if variant != "kronecker" {
            if let Some((_, child)) = self.children.first() {
                return Err(err(child.first_line, format!("factor keys are not used by variant {variant}")));
            }
        }
        Ok(())
    }
}

fn number(s: &str, line: usize) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| err(line, format!("cannot parse '{}' as a number", s.trim())))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite number '{}'", s.trim())));
    }
    Ok(v)
}

fn integer(s: &str, line: usize) -> CliResult<usize> {
    s.trim().parse().map_err(|_| err(line, format!("cannot parse '{}' as a nonnegative integer", s.trim())))
}

fn numbers(s: &str, line: usize) -> CliResult<Vec<f64>> {
    s.split(',').map(|x| number(x, line)).collect()
}

fn broadcast<T: Clone>(v: Vec<T>, n: usize, what: &str, line: usize) -> CliResult<Vec<T>> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); n]),
        m if m == n => Ok(v),
        m => Err(err(line, format!("{what} needs 1 or {n} entries, got {m}"))),
    }
}

fn pdi<T>(r: pdi_core::Result<T>, line: usize) -> CliResult<T> {
    r.map_err(|e| err(line, e))
}

fn parse_gram(dim: &str, path: &str, base: &Path, line: usize) -> CliResult<ComponentCnd> {
    let dim = integer(dim, line)?;
    if dim == 0 {
        return Err(err(line, "gram point dimension must be positive"));
    }
    let full = base.join(path);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(&full)
        .map_err(|e| err(line, format!("cannot open gram file {}: {e}", full.display())))?;
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| err(line, format!("{} row {}: {e}", full.display(), i + 1)))?;
        let vals = rec
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.trim().parse::<f64>().map_err(|_| {
                    err(line, format!("{} row {}, column {}: cannot parse '{f}'", full.display(), i + 1, j + 1))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if vals.len() <= dim {
            return Err(err(
                line,
                format!("{} row {}: expected {dim} coordinates and a matrix row", full.display(), i + 1),
            ));
        }
        points.push(vals[..dim].to_vec());
        rows.push(vals[dim..].to_vec());
    }
    pdi(ComponentCnd::gram(rows, points), line)
}

fn parse_cnd(s: &str, base: &Path, line: usize) -> CliResult<ComponentCnd> {
    let s = s.trim();
    let (head, rest) = s.split_once(':').map_or((s, None), |(h, r)| (h, Some(r)));
    match (head, rest) {
        ("euclidean_power", Some(b)) => pdi(ComponentCnd::euclidean_power(number(b, line)?), line),
        ("squared_euclidean", None) => Ok(ComponentCnd::squared_euclidean()),
        ("shifted", Some(r)) => {
            let (c, inner) = r.split_once(':').ok_or_else(|| err(line, "shifted needs 'shifted:<c>:<base>'"))?;
            pdi(ComponentCnd::shifted(parse_cnd(inner, base, line)?, number(c, line)?), line)
        }
        ("gram", Some(r)) => {
            let (dim, path) = r.split_once(':').ok_or_else(|| err(line, "gram needs 'gram:<dim>:<path>'"))?;
            parse_gram(dim, path.trim(), base, line)
        }
        _ => Err(err(line, format!("unknown component kernel '{s}'"))),
    }
}

/// Comma separated component kernels; a single entry is broadcast.
fn parse_gammas(s: &str, n: usize, base: &Path, line: usize) -> CliResult<Vec<ComponentCnd>> {
    let list = s.split(',').map(|g| parse_cnd(g, base, line)).collect::<CliResult<Vec<_>>>()?;
    broadcast(list, n, "gamma", line)
}

fn parse_psi(node: &Node, ell: usize) -> CliResult<CmFunctionSpec> {
    let (s, line) = node.required("psi")?;
    let s = s.trim();
    let (head, rest) = s.split_once(':').map_or((s, None), |(h, r)| (h, Some(r)));
    let kind = match (head, rest) {
        ("power", Some(a)) => CmKind::Power { a: number(a, line)? },
        ("log_power", None) => CmKind::LogPower,
        ("exponential", Some(r)) => CmKind::Exponential { r: number(r, line)? },
        ("shifted_power", Some(r)) => {
            let (c, a) = r.split_once(':').ok_or_else(|| err(line, "shifted_power needs 'shifted_power:<c>:<a>'"))?;
            CmKind::ShiftedPower { c: number(c, line)?, a: number(a, line)? }
        }
        ("mixture", Some(a)) => {
            let atoms = node
                .all("psi_atom")
                .iter()
                .map(|(v, l)| {
                    let (r, w) = v.split_once('|').ok_or_else(|| err(*l, "psi_atom needs '<r> | <weight>'"))?;
                    Ok((number(r, *l)?, number(w, *l)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            CmKind::Mixture { a_ell: number(a, line)?, atoms }
        }
        _ => return Err(err(line, format!("unknown completely monotone function '{s}'"))),
    };
    if !matches!(kind, CmKind::Mixture { .. }) {
        if let Some((_, l)) = node.one("psi_atom") {
            return Err(err(l, "psi_atom is only used by psi = mixture:<a>"));
        }
    }
    pdi(CmFunctionSpec::new(ell, kind), line)
}

fn parse_atom(v: &str, n: usize, line: usize) -> CliResult<BernsteinAtom> {
    let (w, r) = v.split_once('|').ok_or_else(|| err(line, "atom needs '<weight> | <r list>'"))?;
    let r = broadcast(numbers(r, line)?, n, "atom rates", line)?;
    Ok(BernsteinAtom { r, weight: number(w, line)? })
}

fn parse_face(v: &str, n: usize, k: usize, line: usize) -> CliResult<FaceTerm> {
    let parts: Vec<&str> = v.split('|').collect();
    let [members, w, r] = parts[..] else {
        return Err(err(line, "face needs '<components> | <weight> | <r list>'"));
    };
    let members = members.split(',').map(|m| integer(m, line)).collect::<CliResult<Vec<_>>>()?;
    let face = pdi(SubsetIndex::new(n, members), line)?;
    if face.len() != k {
        return Err(err(line, format!("face has {} components, order is {k}", face.len())));
    }
    let r = broadcast(numbers(r, line)?, k, "face rates", line)?;
    let spec = pdi(BernsteinSpecK::product_form(k, vec![BernsteinAtom { r, weight: number(w, line)? }]), line)?;
    Ok(FaceTerm { face, spec })
}

fn build(node: &Node, n: usize, base: &Path) -> CliResult<PdiKernelSpec> {
    let (variant, vline) = node.required("variant")?;
    let (order, oline) = node.required("order")?;
    let k = integer(order, oline)?;
    match variant.trim() {
        "bernstein" => {
            node.allow_only(&["variant", "order", "n", "components", "gamma", "atom", "face"], "bernstein")?;
            let (g, gline) = node.required("gamma")?;
            let gammas = parse_gammas(g, n, base, gline)?;
            let atoms = node.all("atom").iter().map(|(v, l)| parse_atom(v, n, *l)).collect::<CliResult<Vec<_>>>()?;
            let faces = node.all("face").iter().map(|(v, l)| parse_face(v, n, k, *l)).collect::<CliResult<Vec<_>>>()?;
            let g = if k == n && faces.is_empty() {
                BernsteinSpecK::product_form(n, atoms)
            } else {
                BernsteinSpecK::order_k(n, k, faces, atoms)
            };
            pdi(PdiKernelSpec::bernstein(pdi(g, oline)?, gammas), vline)
        }
        "sum_form" => {
            node.allow_only(&["variant", "order", "n", "components", "gamma", "psi", "psi_atom"], "sum_form")?;
            let (g, gline) = node.required("gamma")?;
            let gammas = parse_gammas(g, n, base, gline)?;
            pdi(PdiKernelSpec::sum_form(parse_psi(node, k)?, gammas), vline)
        }
        "kronecker" => {
            node.allow_only(&["variant", "order", "n", "components"], "kronecker")?;
            if node.children.is_empty() {
                return Err(err(vline, "kronecker needs at least one factor.<id>.* block"));
            }
            let factors = node
                .children
                .iter()
                .map(|(id, child)| {
                    let (c, cline) = child
                        .one("components")
                        .ok_or_else(|| err(child.first_line, format!("factor '{id}' is missing 'components'")))?;
                    let members = c.split(',').map(|m| integer(m, cline)).collect::<CliResult<Vec<_>>>()?;
                    let components = pdi(SubsetIndex::new(n, members), cline)?;
                    check_n(child, components.len())?;
                    Ok(KroneckerFactor { spec: build(child, components.len(), base)?, components })
                })
                .collect::<CliResult<Vec<_>>>()?;
            pdi(PdiKernelSpec::kronecker(factors, k), vline)
        }
        other => Err(err(vline, format!("unknown variant '{other}' (expected bernstein, sum_form, kronecker)"))),
    }
}

fn check_n(node: &Node, n: usize) -> CliResult<()> {
    if let Some((v, l)) = node.one("n") {
        let m = integer(v, l)?;
        if m != n {
            return Err(err(l, format!("n = {m} does not match the {n} components")));
        }
    }
    Ok(())
}

/// Parse a kernel spec document; `base` resolves relative file references.
pub fn parse_kernel_spec(text: &str, base: &Path) -> CliResult<PdiKernelSpec> {
    let mut root = Node::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| err(line, "expected 'key = value'"))?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(err(line, format!("invalid key '{key}'")));
        }
        root.insert(&key.split('.').collect::<Vec<_>>(), value.trim().to_string(), line)?;
    }
    if let Some((_, l)) = root.one("components") {
        return Err(err(l, "'components' is only used inside factor blocks"));
    }
    let (n, line) = root.required("n")?;
    let n = integer(n, line)?;
    if n == 0 {
        return Err(err(line, "n must be positive"));
    }
    build(&root, n, base)
}

/// Kernel from `preset:<name>` or from a spec file path. Presets take their
/// order from `k`, defaulting to `n`.
pub fn load_kernel(arg: &str, n: usize, k: Option<usize>) -> CliResult<PdiKernelSpec> {
    if let Some(name) = arg.strip_prefix("preset:") {
        return Ok(preset(name, n, k.unwrap_or(n))?);
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read kernel spec {}: {e}", path.display())))?;
    parse_kernel_spec(&text, path.parent().unwrap_or(Path::new(".")))
}
