//! Almost direct products `(V × F_n)/G` and simple minimal models.
//!
//! A product element acts on the atom through a symmetry permutation and on
//! the focus factor through a [`FocusAutomorphism`]. Groups are given by
//! generators; the group itself is the closure of the generator pairs under
//! componentwise composition.

mod invariants;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::atom::{quotient_atom, FGraph, FGraphJson, NameTable};
use crate::error::{AtlasError, Result};
use crate::focus::{shift_automorphism, Angle, FocusAutomorphism};
use crate::permgroup::{Permutation, PermutationGroup, MAX_GROUP_ORDER};

pub use invariants::{
    chain_invariant, chains_dot, fingerprint, fingerprint_with, half_order_fixed_count,
    m1_decomposition, m1_decomposition_with, m2_decomposition, rank0_count, torus_counts,
    ChainInvariant, Fingerprint, M1,
};

/// One group element: an atom symmetry paired with a focus automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement {
    pub atom: Permutation,
    pub focus: FocusAutomorphism,
}

impl ProductElement {
    pub fn new(atom: Permutation, focus: FocusAutomorphism) -> Self {
        ProductElement { atom, focus }
    }

    pub fn identity(points: usize, n: usize) -> Result<Self> {
        Ok(ProductElement {
            atom: Permutation::identity(points),
            focus: FocusAutomorphism::identity(n)?,
        })
    }

    pub fn compose(&self, other: &ProductElement) -> ProductElement {
        ProductElement {
            atom: self.atom.compose(&other.atom),
            focus: self.focus.compose(&other.focus),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.atom.is_identity() && self.focus.is_identity()
    }

    pub fn pow(&self, k: u64) -> ProductElement {
        ProductElement {
            atom: self.atom.pow(k as i64),
            focus: self.focus.pow(k),
        }
    }
}

impl fmt::Display for ProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, shift {}, angle {})",
            self.atom,
            self.focus.shift(),
            self.focus.angle()
        )
    }
}

/// Why a product element acts freely, or where it has a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Identity,
    /// A nonzero focus shift moves every point of the focus factor's leaf.
    FocusShift,
    /// The atom part is nontrivial, fixes no f-graph vertex and preserves no
    /// saddle, so it moves every point of the atom.
    AtomFree,
    /// The element fixes the product of an atom point and a focus point.
    Fixed {
        atom_location: String,
        focus_point: usize,
    },
}

/// Combinatorial freeness certificate for one element of `atom × F_n`.
pub fn freeness(atom: &FGraph, element: &ProductElement) -> Result<Freeness> {
    if element.is_identity() {
        return Ok(Freeness::Identity);
    }
    if element.focus.shift() != 0 {
        return Ok(Freeness::FocusShift);
    }
    // Shift zero: the focus part fixes every rank-0 point x_q, so the
    // element is free exactly when its atom part is.
    let pi = &element.atom;
    if pi.is_identity() {
        return Ok(Freeness::Fixed {
            atom_location: "every point of the atom".to_string(),
            focus_point: 0,
        });
    }
    let tau = atom.tau();
    if let Some(i) = (0..atom.points()).find(|&i| pi.apply(i) == tau.apply(i)) {
        let (a, b) = (i.min(tau.apply(i)), i.max(tau.apply(i)));
        return Ok(Freeness::Fixed {
            atom_location: format!("saddle ({a}, {b})"),
            focus_point: 0,
        });
    }
    if pi.fixed_points().next().is_some() {
        return Err(AtlasError::UndecidableFreeness {
            element: element.to_string(),
        });
    }
    Ok(Freeness::AtomFree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostDirectProduct {
    atom: FGraph,
    n: usize,
    generators: Vec<ProductElement>,
    elements: BTreeSet<ProductElement>,
}

impl AlmostDirectProduct {
    /// Validates generators, closes them into a group and checks freeness.
    /// With `declared_order`, the closure must have exactly that order.
    pub fn build(
        atom: FGraph,
        n: usize,
        generators: Vec<ProductElement>,
        declared_order: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(AtlasError::EmptyFocus);
        }
        for g in &generators {
            if g.atom.degree() != atom.points() {
                return Err(AtlasError::DegreeMismatch {
                    expected: atom.points(),
                    found: g.atom.degree(),
                });
            }
            if g.focus.n() != n {
                return Err(AtlasError::DegreeMismatch {
                    expected: n,
                    found: g.focus.n(),
                });
            }
            if !atom.is_symmetry(&g.atom) {
                return Err(AtlasError::NotASymmetry {
                    perm: g.atom.clone(),
                });
            }
        }
        let elements = close(&atom, n, &generators)?;
        if let Some(order) = declared_order {
            if order != elements.len() {
                return Err(AtlasError::NotAHomomorphism {
                    reason: format!(
                        "generators close to a group of order {}, declared {order}",
                        elements.len()
                    ),
                });
            }
        }
        for e in &elements {
            if let Freeness::Fixed {
                atom_location,
                focus_point,
            } = freeness(&atom, e)?
            {
                return Err(AtlasError::NonFreeAction {
                    element: e.to_string(),
                    location: format!("{atom_location} × focus point x{focus_point}"),
                });
            }
        }
        Ok(AlmostDirectProduct {
            atom,
            n,
            generators,
            elements,
        })
    }

    pub fn atom(&self) -> &FGraph {
        &self.atom
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ProductElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &ProductElement> {
        self.elements.iter()
    }

    pub fn to_json(&self, names: &NameTable) -> ModelJson {
        ModelJson {
            format: MODEL_FORMAT.to_string(),
            atom: inline_atom(&self.atom, names),
            focus_complexity: self.n,
            generators: self
                .generators
                .iter()
                .map(GeneratorJson::from_element)
                .collect(),
            group_order: Some(self.order()),
        }
    }
}

fn close(
    atom: &FGraph,
    n: usize,
    generators: &[ProductElement],
) -> Result<BTreeSet<ProductElement>> {
    let identity = ProductElement::identity(atom.points(), n)?;
    let mut elements = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if elements.insert(y.clone()) {
                if elements.len() > MAX_GROUP_ORDER {
                    return Err(AtlasError::GroupTooLarge {
                        limit: MAX_GROUP_ORDER,
                    });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(elements)
}

/// `(atom × F_n)/Z_k` with generator `(alpha, shift n/k, angle 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleMinimalModel {
    atom: FGraph,
    n: usize,
    k: usize,
    generator: Permutation,
}

impl SimpleMinimalModel {
    pub fn new(atom: FGraph, n: usize, generator: Permutation) -> Result<Self> {
        if n == 0 {
            return Err(AtlasError::EmptyFocus);
        }
        if !atom.is_symmetry(&generator) {
            return Err(AtlasError::NotASymmetry { perm: generator });
        }
        let k = generator.order();
        if !n.is_multiple_of(k) {
            return Err(AtlasError::InvalidModel(format!(
                "generator order {k} does not divide focus complexity {n}"
            )));
        }
        Ok(SimpleMinimalModel {
            atom,
            n,
            k,
            generator,
        })
    }

    pub fn atom(&self) -> &FGraph {
        &self.atom
    }

    pub fn complexity(&self) -> usize {
        self.atom.complexity()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Permutation {
        &self.generator
    }

    /// The focus part of the generator: shift `n/k`, angle 0.
    pub fn focus_generator(&self) -> FocusAutomorphism {
        shift_automorphism(self.n, (self.n / self.k) % self.n, Angle::ZERO)
            .expect("n/k < n for k > 1")
    }

    pub fn generator_element(&self) -> ProductElement {
        ProductElement::new(self.generator.clone(), self.focus_generator())
    }

    /// "B x F1" or "(B x F2)/Z2".
    pub fn display_name(&self, names: &NameTable) -> String {
        let atom = names.identify(&self.atom);
        if self.k == 1 {
            format!("{atom} x F{}", self.n)
        } else {
            format!("({atom} x F{})/Z{}", self.n, self.k)
        }
    }

    pub fn to_adp(&self) -> AlmostDirectProduct {
        let gens = if self.k == 1 {
            Vec::new()
        } else {
            vec![self.generator_element()]
        };
        AlmostDirectProduct::build(self.atom.clone(), self.n, gens, Some(self.k))
            .expect("a simple minimal model is a valid almost direct product")
    }

    pub fn to_json(&self, names: &NameTable) -> ModelJson {
        let generators = if self.k == 1 {
            Vec::new()
        } else {
            vec![GeneratorJson::from_element(&self.generator_element())]
        };
        ModelJson {
            format: MODEL_FORMAT.to_string(),
            atom: inline_atom(&self.atom, names),
            focus_complexity: self.n,
            generators,
            group_order: Some(self.k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub group_order: usize,
    pub normal_order: usize,
    pub atom_complexity: usize,
    pub focus_complexity: usize,
    pub k: usize,
}

/// Factors out the subgroup `N` generated by elements with zero focus shift
/// and elements trivial on the atom, leaving a cyclic action.
pub fn reduce(adp: &AlmostDirectProduct) -> Result<(SimpleMinimalModel, ReductionReport)> {
    let points = adp.atom.points();
    let n = adp.n;
    let seeds: Vec<ProductElement> = adp
        .elements
        .iter()
        .filter(|e| e.focus.shift() == 0 || e.atom.is_identity())
        .cloned()
        .collect();
    let normal = close(&adp.atom, n, &seeds)?;
    for g in &adp.elements {
        for x in &normal {
            let inv = g.pow(g.focus.order().lcm(&g.atom.order()) as u64 - 1);
            assert!(
                normal.contains(&g.compose(x).compose(&inv)),
                "N is normal in G for every valid product"
            );
        }
    }
    let group_order = adp.elements.len();
    let k = group_order / normal.len();

    // Coset generator: the first element whose powers reach N only at k.
    let in_normal_at =
        |g: &ProductElement| (1..=group_order).find(|&j| normal.contains(&g.pow(j as u64)));
    let coset_gen = adp
        .elements
        .iter()
        .find(|g| in_normal_at(g) == Some(k))
        .ok_or(AtlasError::QuotientNotCyclic {
            group_order,
            normal_order: normal.len(),
        })?;

    let atom_image: BTreeSet<Permutation> = normal.iter().map(|e| e.atom.clone()).collect();
    let h = PermutationGroup::generate(points, atom_image.iter())?;
    let reduced_atom = quotient_atom(&adp.atom, &h)?;
    let n_red = normal.iter().fold(n, |acc, e| acc.gcd(&e.focus.shift()));

    // Pick the power of the coset generator whose induced shift is n'/k.
    let target = n_red / k;
    let exponent = (1..=k)
        .find(|&e| (e * coset_gen.focus.shift()) % n_red == target % n_red)
        .expect("the induced shift has order k in Z_n'");
    let g = coset_gen.pow(exponent as u64);

    let orbit_of = crate::atom::orbit_index(points, &h);
    let mut induced = vec![usize::MAX; reduced_atom.points()];
    for i in 0..points {
        induced[orbit_of[i]] = orbit_of[g.atom.apply(i)];
    }
    let induced = Permutation::new(induced)?;
    let model = SimpleMinimalModel::new(reduced_atom, n_red, induced)?;
    debug_assert_eq!(model.k, k);
    let report = ReductionReport {
        group_order,
        normal_order: normal.len(),
        atom_complexity: model.complexity(),
        focus_complexity: n_red,
        k,
    };
    Ok((model, report))
}

pub const MODEL_FORMAT: &str = "adp-v1";

/// An atom given by table name (canonical labeling) or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomRef {
    Name(String),
    Inline(FGraphJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub atom_perm: Permutation,
    pub focus_shift: usize,
    #[serde(default)]
    pub focus_angle: Angle,
}

impl GeneratorJson {
    fn from_element(e: &ProductElement) -> Self {
        GeneratorJson {
            atom_perm: e.atom.clone(),
            focus_shift: e.focus.shift(),
            focus_angle: e.focus.angle(),
        }
    }
}

/// `{"format":"adp-v1","atom":…,"focus_complexity":n,"generators":[…]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub format: String,
    pub atom: AtomRef,
    pub focus_complexity: usize,
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
}

impl ModelJson {
    /// Parses a model document, or any object carrying one under `"model"`
    /// (such as a catalog entry).
    pub fn parse(text: &str) -> Result<ModelJson> {
        let mut value: Value = serde_json::from_str(text)?;
        if value.get("format").is_none() {
            if let Some(inner) = value.get_mut("model") {
                value = inner.take();
            }
        }
        let model: ModelJson = serde_json::from_value(value)?;
        if model.format != MODEL_FORMAT {
            return Err(AtlasError::Parse(format!(
                "expected format {MODEL_FORMAT:?}, found {:?}",
                model.format
            )));
        }
        Ok(model)
    }

    pub fn from_path(path: &Path) -> Result<ModelJson> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AtlasError::Parse(format!("cannot read {}: {e}", path.display())))?;
        ModelJson::parse(&text)
    }

    pub fn resolve_atom(&self, names: &NameTable) -> Result<FGraph> {
        match &self.atom {
            AtomRef::Name(name) => names.resolve(name),
            AtomRef::Inline(f) => f.to_fgraph(),
        }
    }

    pub fn to_adp(&self, names: &NameTable) -> Result<AlmostDirectProduct> {
        let atom = self.resolve_atom(names)?;
        let n = self.focus_complexity;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                Ok(ProductElement::new(
                    g.atom_perm.clone(),
                    shift_automorphism(n, g.focus_shift, g.focus_angle)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        AlmostDirectProduct::build(atom, n, generators, self.group_order)
    }

    /// The model as a simple minimal model, when it already is one: at most
    /// one generator, with angle 0 and shift `n/k`.
    pub fn to_simple(&self, names: &NameTable) -> Result<SimpleMinimalModel> {
        let adp = self.to_adp(names)?;
        let atom = adp.atom.clone();
        let model = match adp.generators.as_slice() {
            [] => {
                SimpleMinimalModel::new(atom.clone(), adp.n, Permutation::identity(atom.points()))?
            }
            [g] => SimpleMinimalModel::new(atom, adp.n, g.atom.clone())?,
            _ => {
                return Err(AtlasError::InvalidModel(
                    "more than one generator; run reduce first".to_string(),
                ))
            }
        };
        if model.to_adp().elements != adp.elements {
            return Err(AtlasError::InvalidModel(format!(
                "generator must be (alpha, shift n/k = {}, angle 0/1) with alpha of order k",
                model.n / model.k
            )));
        }
        Ok(model)
    }
}

fn inline_atom(atom: &FGraph, names: &NameTable) -> AtomRef {
    let name = names.identify(atom);
    AtomRef::Inline(atom.to_json(Some(name.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::symmetry_group;

    fn names() -> &'static NameTable {
        NameTable::shipped()
    }

    fn atom(name: &str) -> FGraph {
        names().resolve(name).unwrap()
    }

    fn elem(perm: &[usize], n: usize, shift: usize, angle: Angle) -> ProductElement {
        ProductElement::new(
            Permutation::new(perm.to_vec()).unwrap(),
            shift_automorphism(n, shift, angle).unwrap(),
        )
    }

    fn half() -> Angle {
        Angle::new(1, 2).unwrap()
    }

    fn involutions(f: &FGraph) -> Vec<Permutation> {
        symmetry_group(f)
            .elements()
            .filter(|p| p.order() == 2)
            .cloned()
            .collect()
    }

    #[test]
    fn build_examples() {
        let b = atom("B");
        let adp = AlmostDirectProduct::build(
            b.clone(),
            2,
            vec![elem(&[1, 0], 2, 1, Angle::ZERO)],
            Some(2),
        )
        .unwrap();
        assert_eq!(adp.order(), 2);

        let d1 = atom("D1");
        let inv = involutions(&d1);
        assert_eq!(inv.len(), 1);
        let g = ProductElement::new(inv[0].clone(), shift_automorphism(1, 0, half()).unwrap());
        assert!(AlmostDirectProduct::build(d1, 1, vec![g], Some(2)).is_ok());

        let err =
            AlmostDirectProduct::build(b, 1, vec![elem(&[1, 0], 1, 0, half())], None).unwrap_err();
        assert!(matches!(err, AtlasError::NonFreeAction { .. }), "{err}");
    }

    #[test]
    fn build_rejections() {
        let b = atom("B");
        let err = AlmostDirectProduct::build(
            b.clone(),
            2,
            vec![elem(&[1, 0], 2, 1, Angle::ZERO)],
            Some(4),
        );
        assert!(matches!(err, Err(AtlasError::NotAHomomorphism { .. })));
        let c1 = atom("C1");
        let err =
            AlmostDirectProduct::build(c1, 1, vec![elem(&[1, 0, 3, 2], 1, 0, Angle::ZERO)], None);
        assert!(matches!(err, Err(AtlasError::NotASymmetry { .. })));
        // Pure flow with trivial atom part fixes everything on x_0.
        let err = AlmostDirectProduct::build(b, 1, vec![elem(&[0, 1], 1, 0, half())], None);
        assert!(matches!(err, Err(AtlasError::NonFreeAction { .. })));
    }

    #[test]
    fn reduce_half_period_example() {
        let d1 = atom("D1");
        let g = ProductElement::new(
            involutions(&d1)[0].clone(),
            shift_automorphism(1, 0, half()).unwrap(),
        );
        let adp = AlmostDirectProduct::build(d1, 1, vec![g], None).unwrap();
        let (model, report) = reduce(&adp).unwrap();
        assert_eq!(model.display_name(names()), "B x F1");
        assert_eq!(report.group_order, 2);
        assert_eq!(report.normal_order, 2);
        assert_eq!(
            (report.atom_complexity, report.focus_complexity, report.k),
            (1, 1, 1)
        );
    }

    #[test]
    fn reduce_klein_example() {
        let c2 = atom("C2");
        let inv = involutions(&c2);
        assert_eq!(inv.len(), 3);
        let rz = inv
            .iter()
            .find(|p| c2.fixed_saddles(p) == 2)
            .unwrap()
            .clone();
        let rx = inv
            .iter()
            .find(|p| c2.fixed_saddles(p) == 0)
            .unwrap()
            .clone();
        let g1 = ProductElement::new(rx, shift_automorphism(2, 0, half()).unwrap());
        let g2 = ProductElement::new(rz, shift_automorphism(2, 1, Angle::ZERO).unwrap());
        let adp = AlmostDirectProduct::build(c2, 2, vec![g1, g2], Some(4)).unwrap();
        let (model, report) = reduce(&adp).unwrap();
        assert_eq!(model.display_name(names()), "(B x F2)/Z2");
        assert_eq!(report.normal_order, 2);
        assert_eq!(model.generator().images(), &[1, 0]);
    }

    #[test]
    fn reduce_is_identity_on_simple_models() {
        let c1 = atom("C1");
        for g in symmetry_group(&c1).elements() {
            for mult in 1..=2 {
                let model =
                    SimpleMinimalModel::new(c1.clone(), g.order() * mult, g.clone()).unwrap();
                let (back, report) = reduce(&model.to_adp()).unwrap();
                assert_eq!(back, model);
                assert_eq!(report.normal_order, 1);
            }
        }
    }

    #[test]
    fn simple_model_validation() {
        let c1 = atom("C1");
        let r = symmetry_group(&c1)
            .elements()
            .find(|p| p.order() == 4)
            .unwrap()
            .clone();
        assert!(matches!(
            SimpleMinimalModel::new(c1.clone(), 2, r.clone()),
            Err(AtlasError::InvalidModel(_))
        ));
        let m = SimpleMinimalModel::new(c1, 4, r).unwrap();
        assert_eq!(m.display_name(names()), "(C1 x F4)/Z4");
        assert_eq!(m.focus_generator().shift(), 1);
    }

    #[test]
    fn model_json_round_trip() {
        let c1 = atom("C1");
        let r = symmetry_group(&c1)
            .elements()
            .find(|p| p.order() == 4)
            .unwrap()
            .clone();
        let m = SimpleMinimalModel::new(c1, 8, r).unwrap();
        let text = serde_json::to_string(&m.to_json(names())).unwrap();
        let back = ModelJson::parse(&text).unwrap().to_simple(names()).unwrap();
        assert_eq!(back, m);
        let wrapped = format!(r#"{{"name":"x","model":{text}}}"#);
        assert_eq!(
            ModelJson::parse(&wrapped)
                .unwrap()
                .to_simple(names())
                .unwrap(),
            m
        );
    }

    #[test]
    fn model_json_by_name() {
        let text = r#"{"format":"adp-v1","atom":"B","focus_complexity":2,
            "generators":[{"atom_perm":[1,0],"focus_shift":1,"focus_angle":"0/1"}]}"#;
        let m = ModelJson::parse(text).unwrap().to_simple(names()).unwrap();
        assert_eq!(m.display_name(names()), "(B x F2)/Z2");
        let bad = r#"{"format":"adp-v2","atom":"B","focus_complexity":1}"#;
        assert!(matches!(ModelJson::parse(bad), Err(AtlasError::Parse(_))));
        let angled = r#"{"format":"adp-v1","atom":"B","focus_complexity":2,
            "generators":[{"atom_perm":[1,0],"focus_shift":1,"focus_angle":"1/2"}]}"#;
        let json = ModelJson::parse(angled).unwrap();
        assert!(json.to_adp(names()).is_ok());
        assert!(matches!(
            json.to_simple(names()),
            Err(AtlasError::InvalidModel(_))
        ));
    }
}
