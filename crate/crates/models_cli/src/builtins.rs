//! The shipped models.

use std::collections::BTreeMap;

use exactlin::Rational;
use gla_free::FreeGradedLie;

use crate::error::CliError;
use crate::expr::{canonical, Expr};
use crate::spec::{ModelFile, ModelSpec, MorphismSpec};

/// `L(x_1,…,x_k)` with `|x_i| = 2i − 1` and `d x_i = ½ Σ_{p+q=i} [x_p, x_q]`,
/// differentials written in the Lyndon basis.
pub fn builtin_cp(k: usize) -> Result<ModelSpec, CliError> {
    if k == 0 {
        return Err(CliError::InvalidInput("cp(k) needs k ≥ 1".into()));
    }
    let mut spec = ModelSpec::new(&format!("cp{k}"));
    spec.generators = (1..=k).map(|i| (format!("x{i}"), 2 * i as i64 - 1)).collect();
    let free = FreeGradedLie::free(spec.generator_set()?, 2 * k as i64)?;
    let gens = spec.generator_set()?;
    for i in 2..=k {
        let mut sum = Expr::zero();
        for p in 1..i {
            let raw = Expr::bracket(Expr::gen(&format!("x{p}")), Expr::gen(&format!("x{}", i - p)));
            sum = sum.plus(raw.scaled(&Rational::new(1, 2)));
        }
        let x = sum
            .evaluate(&gens, 2 * i as i64 - 2)
            .map_err(|e| CliError::InvalidInput(e.0))?;
        spec.differentials.push((format!("x{i}"), canonical(&free, &x)?));
    }
    Ok(spec)
}

/// `cp(k) → cp(n)` sending `x_i` to `x_i`.
pub fn builtin_cp_inclusion(k: usize, n: usize) -> Result<ModelFile, CliError> {
    if k > n {
        return Err(CliError::InvalidInput(format!("cp({k}) does not include into cp({n})")));
    }
    let small = builtin_cp(k)?;
    let big = builtin_cp(n)?;
    let images = (1..=k).map(|i| (format!("x{i}"), Expr::gen(&format!("x{i}")))).collect();
    let map = MorphismSpec {
        name: "i".into(),
        source: small.name.clone(),
        target: big.name.clone(),
        images,
    };
    Ok(ModelFile {
        models: vec![small, big],
        maps: vec![map],
    })
}

/// `L(u)` with `|u| = n − 2`, a model of the `(n−1)`-sphere.
pub fn builtin_sphere(n: i64) -> Result<ModelSpec, CliError> {
    if n < 3 {
        return Err(CliError::InvalidInput(format!(
            "sphere({n}) is not simply connected; need n ≥ 3"
        )));
    }
    let mut spec = ModelSpec::new(&format!("sphere{n}"));
    spec.generators.push(("u".into(), n - 2));
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskPair {
    pub file: ModelFile,
    /// Whether the map is a free extension.
    pub cofibration: bool,
}

fn base_u(name: &str) -> ModelSpec {
    let mut m = ModelSpec::new(name);
    m.generators.push(("u".into(), 2));
    m
}

/// `L(u) ↪ L(u,v)` with `dv = u`, and `L(u) → L(a,b)` with `db = a`,
/// `u ↦ [a,a]`.
pub fn builtin_disk_example() -> [DiskPair; 2] {
    let mut total = ModelSpec::new("disk1_total");
    total.generators = vec![("u".into(), 2), ("v".into(), 3)];
    total.differentials = vec![("v".into(), Expr::gen("u"))];
    let first = ModelFile {
        models: vec![base_u("disk1_base"), total],
        maps: vec![MorphismSpec {
            name: "i1".into(),
            source: "disk1_base".into(),
            target: "disk1_total".into(),
            images: vec![("u".into(), Expr::gen("u"))],
        }],
    };
    let mut ab = ModelSpec::new("disk2_total");
    ab.generators = vec![("a".into(), 1), ("b".into(), 2)];
    ab.differentials = vec![("b".into(), Expr::gen("a"))];
    let second = ModelFile {
        models: vec![base_u("disk2_base"), ab],
        maps: vec![MorphismSpec {
            name: "i2".into(),
            source: "disk2_base".into(),
            target: "disk2_total".into(),
            images: vec![("u".into(), Expr::bracket(Expr::gen("a"), Expr::gen("a")))],
        }],
    };
    [
        DiskPair {
            file: first,
            cofibration: true,
        },
        DiskPair {
            file: second,
            cofibration: false,
        },
    ]
}

/// Both disk pairs in one file.
pub fn disk_file() -> ModelFile {
    let mut out = ModelFile::default();
    for p in builtin_disk_example() {
        out.models.extend(p.file.models);
        out.maps.extend(p.file.maps);
    }
    out
}

/// For `V` with a duality pairing `x ↦ x#` of total degree `n − 2`, listed
/// as `(x, x#)` for the generators it involves: the
/// sphere `L(u)`, the map `ω: u ↦ ½ Σ [x#, x]` into `V` and its replacement
/// `L(V,u,v)` with `dv = u − ω`, together with the inclusion of `L(u)`.
///
/// Models are named `sphere<n>`, `V`'s own name and `<name>_uv`; maps `i`
/// (the free extension) and `omega`.
pub fn builtin_boundary_model(v: &ModelSpec, pairing: &[(String, String)], n: i64) -> Result<ModelFile, CliError> {
    let sphere = builtin_sphere(n)?;
    let gens = v.generator_set()?;
    for reserved in ["u", "v"] {
        if v.degree_of(reserved).is_some() {
            return Err(CliError::InvalidInput(format!("V may not have a generator named {reserved}")));
        }
    }
    let dual: BTreeMap<&str, &str> = pairing.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    if dual.len() != pairing.len() {
        return Err(CliError::InvalidInput("the pairing gives some generator two duals".into()));
    }
    let mut omega = Expr::zero();
    for (x, y) in pairing {
        let d = v
            .degree_of(x)
            .ok_or_else(|| CliError::InvalidInput(format!("{x} is not a generator")))?;
        let dy = v
            .degree_of(y)
            .ok_or_else(|| CliError::InvalidInput(format!("the dual {y} of {x} is not a generator")))?;
        if d + dy != n - 2 {
            return Err(CliError::InvalidInput(format!("|{y}| + |{x}| = {} but n − 2 = {}", d + dy, n - 2)));
        }
        omega = omega.plus(Expr::bracket(Expr::gen(y), Expr::gen(x)).scaled(&Rational::new(1, 2)));
    }
    let l = v.build(n - 1)?;
    let w = omega
        .evaluate(&gens, n - 2)
        .map_err(|e| CliError::InvalidInput(e.0))?;
    let dw = l.apply_d(&w)?;
    if !dw.is_zero() {
        return Err(CliError::NotACycle {
            what: "ω".into(),
            value: l.format_element(&dw),
        });
    }
    let omega = canonical(&l, &w)?;
    let mut total = v.clone();
    total.name = format!("{}_uv", v.name);
    total.generators.push(("u".into(), n - 2));
    total.generators.push(("v".into(), n - 1));
    total.differentials.push(("v".into(), Expr::gen("u").minus(omega.clone())));
    let i = MorphismSpec {
        name: "i".into(),
        source: sphere.name.clone(),
        target: total.name.clone(),
        images: vec![("u".into(), Expr::gen("u"))],
    };
    let om = MorphismSpec {
        name: "omega".into(),
        source: sphere.name.clone(),
        target: v.name.clone(),
        images: vec![("u".into(), omega)],
    };
    Ok(ModelFile {
        models: vec![sphere, v.clone(), total],
        maps: vec![i, om],
    })
}

/// `V = {x1, x2}` in degree 1 with `x1# = x2`, `x2# = x1`, and `n = 4`.
pub fn boundary_fixture() -> ModelFile {
    let mut v = ModelSpec::new("base");
    v.generators = vec![("x1".into(), 1), ("x2".into(), 1)];
    let pairing = [("x1".to_string(), "x2".to_string()), ("x2".to_string(), "x1".to_string())];
    builtin_boundary_model(&v, &pairing, 4).expect("the shipped boundary fixture is valid")
}

/// Single-model files for `cp` and `sphere`.
pub fn single(spec: ModelSpec) -> ModelFile {
    ModelFile {
        models: vec![spec],
        maps: Vec::new(),
    }
}

/// Resolves `cp:K`, `cp:K:N`, `sphere:N`, `disk`, `disk:1`, `disk:2` and
/// `boundary`.
pub fn resolve_builtin(name: &str) -> Result<ModelFile, CliError> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| -> Result<i64, CliError> {
        s.parse()
            .map_err(|_| CliError::UnknownModel(name.to_string()))
    };
    match parts.as_slice() {
        ["cp", k] => Ok(single(builtin_cp(num(k)?.max(0) as usize)?)),
        ["cp", k, n] => builtin_cp_inclusion(num(k)?.max(0) as usize, num(n)?.max(0) as usize),
        ["sphere", n] => Ok(single(builtin_sphere(num(n)?)?)),
        ["disk"] => Ok(disk_file()),
        ["disk", "1"] => Ok(builtin_disk_example()[0].file.clone()),
        ["disk", "2"] => Ok(builtin_disk_example()[1].file.clone()),
        ["boundary"] => Ok(boundary_fixture()),
        _ => Err(CliError::UnknownModel(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_model_file;

    #[test]
    fn projective_models() {
        let cp1 = builtin_cp(1).unwrap();
        assert_eq!(cp1.generators, vec![("x1".into(), 1)]);
        assert!(cp1.differentials.is_empty());
        let cp2 = builtin_cp(2).unwrap();
        assert_eq!(cp2.differentials[0].1.to_string(), "1/2*[x1,x1]");
        let cp3 = builtin_cp(3).unwrap();
        assert_eq!(cp3.differentials[1].1.to_string(), "[x1,x2]");
        assert!(builtin_cp(0).is_err());
    }

    #[test]
    fn spheres() {
        assert_eq!(builtin_sphere(4).unwrap().generators, vec![("u".into(), 2)]);
        assert_eq!(builtin_sphere(3).unwrap().generators, vec![("u".into(), 1)]);
        assert!(builtin_sphere(2).is_err());
    }

    #[test]
    fn disk_pairs() {
        let [p1, p2] = builtin_disk_example();
        let i1 = p1.file.build_map(&p1.file.maps[0], 6).unwrap();
        let i2 = p2.file.build_map(&p2.file.maps[0], 6).unwrap();
        assert_eq!(i1.is_free_extension(), p1.cofibration);
        assert_eq!(i2.is_free_extension(), p2.cofibration);
        assert!(p1.cofibration && !p2.cofibration);
    }

    #[test]
    fn boundary_fixture_shape() {
        let f = boundary_fixture();
        let total = f.model("base_uv").unwrap();
        assert_eq!(total.differentials[0].1.to_string(), "u - [x1,x2]");
        let i = f.build_map(f.map("i").unwrap(), 6).unwrap();
        assert!(i.is_free_extension());
        let w = f.build_map(f.map("omega").unwrap(), 6).unwrap();
        assert!(!w.is_free_extension());
        let l = total.build(6).unwrap();
        let v = l.generator("v").unwrap();
        assert!(l.apply_d(&l.apply_d(&v).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn boundary_rejects_bad_pairings() {
        let mut v = ModelSpec::new("base");
        v.generators = vec![("x1".into(), 1), ("x2".into(), 2)];
        let p = [("x1".to_string(), "x2".to_string()), ("x2".to_string(), "x1".to_string())];
        assert!(matches!(builtin_boundary_model(&v, &p, 4), Err(CliError::InvalidInput(_))));
        let unknown = [("x1".to_string(), "y".to_string())];
        assert!(builtin_boundary_model(&v, &unknown, 4).is_err());
    }

    #[test]
    fn boundary_rejects_a_non_cycle() {
        // ω = [x,y] and dω = [z,y] once dx = z
        let text = "model base\ngenerator x degree 3\ngenerator y degree 3\ngenerator z degree 2\nd x = z\n";
        let f = parse_model_file(text).unwrap();
        let p: Vec<(String, String)> = [("x", "y"), ("y", "x")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        let e = builtin_boundary_model(&f.models[0], &p, 8).unwrap_err();
        assert!(matches!(e, CliError::NotACycle { .. }), "{e}");
    }

    #[test]
    fn builtins_round_trip() {
        let mut files: Vec<ModelFile> = (1..=4).map(|k| single(builtin_cp(k).unwrap())).collect();
        files.extend((3..=7).map(|n| single(builtin_sphere(n).unwrap())));
        files.push(builtin_cp_inclusion(1, 3).unwrap());
        files.push(disk_file());
        files.push(boundary_fixture());
        for f in files {
            assert_eq!(parse_model_file(&f.to_string()).unwrap(), f, "{f}");
        }
    }

    #[test]
    fn builtin_names_resolve() {
        for name in ["cp:2", "cp:1:2", "sphere:4", "disk", "disk:1", "disk:2", "boundary"] {
            resolve_builtin(name).unwrap();
        }
        assert!(matches!(resolve_builtin("torus"), Err(CliError::UnknownModel(_))));
        assert!(resolve_builtin("sphere:2").is_err());
    }
}
