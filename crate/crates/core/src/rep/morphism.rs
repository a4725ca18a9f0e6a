use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::quiver::{connect, window, Vertex};
use crate::rep::eval::Aux;
use crate::rep::{hom_on_vertices, PathMatrix, Rep, RepNode, Side};
use crate::Budget;

#[derive(Clone)]
pub(crate) enum MorphKind<F: Field> {
    Zero,
    Identity,
    /// Given on finitely many vertices, zero elsewhere.
    Explicit(BTreeMap<Vertex, Mat<F>>),
    /// Given on a window and extended uniquely beyond it on demand.
    Window(BTreeMap<Vertex, Mat<F>>, Budget),
    /// `second ∘ first`.
    Compose(Morphism<F>, Morphism<F>),
    Combination(Vec<(F, Morphism<F>)>),
    Inverse(Morphism<F>),
    PathMatrix(PathMatrix<F>),
    /// Determined by the images of generators `g_j ∈ M(c_j)`.
    FromGenerators { gens: Vec<(Vertex, Vec<F>)>, images: Vec<Vec<F>> },
    /// Determined by composites `φ_j ∘ f` with cogenerating functionals `φ_j` on `N(s_j)`.
    ToCogenerators { cogens: Vec<(Vertex, Vec<F>)>, functionals: Vec<Vec<F>> },
    GlueIn,
    GlueOut,
    SumIn(usize),
    SumOut(usize),
    RestrictIn,
    RestrictOut,
    Restricted(Morphism<F>),
    KernelIn,
    ImageIn,
    ImageOut,
    CokernelOut,
    KernelLift(Morphism<F>),
    CokernelDescent(Morphism<F>),
    Dual(Morphism<F>),
}

pub(crate) struct MorphInner<F: Field> {
    dom: Rep<F>,
    cod: Rep<F>,
    kind: MorphKind<F>,
    cache: Mutex<BTreeMap<Vertex, Arc<Mat<F>>>>,
}

/// A morphism of representations, evaluated lazily vertex by vertex.
pub struct Morphism<F: Field>(Arc<MorphInner<F>>);

impl<F: Field> Clone for Morphism<F> {
    fn clone(&self) -> Self {
        Morphism(self.0.clone())
    }
}

impl<F: Field> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain().describe(), self.codomain().describe())
    }
}

fn stack_rows<F: Field>(blocks: &[Mat<F>], cols: usize) -> Mat<F> {
    let refs: Vec<&Mat<F>> = blocks.iter().collect();
    Mat::vstack(&refs, cols)
}

fn stack_cols<F: Field>(blocks: &[Mat<F>], rows: usize) -> Mat<F> {
    let refs: Vec<&Mat<F>> = blocks.iter().collect();
    Mat::hstack(&refs, rows)
}

impl<F: Field> Morphism<F> {
    pub(crate) fn raw(dom: &Rep<F>, cod: &Rep<F>, kind: MorphKind<F>) -> Self {
        Morphism(Arc::new(MorphInner { dom: dom.clone(), cod: cod.clone(), kind, cache: Mutex::new(BTreeMap::new()) }))
    }

    fn same_quiver(dom: &Rep<F>, cod: &Rep<F>) -> Result<()> {
        if dom.quiver().same_as(cod.quiver()) {
            Ok(())
        } else {
            Err(Error::Malformed("domain and codomain live on different quivers".into()))
        }
    }

    pub fn domain(&self) -> &Rep<F> {
        &self.0.dom
    }

    pub fn codomain(&self) -> &Rep<F> {
        &self.0.cod
    }

    pub(crate) fn kind(&self) -> &MorphKind<F> {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn zero(dom: &Rep<F>, cod: &Rep<F>) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        Ok(Self::raw(dom, cod, MorphKind::Zero))
    }

    pub fn identity(m: &Rep<F>) -> Self {
        Self::raw(m, m, MorphKind::Identity)
    }

    fn check_shapes(dom: &Rep<F>, cod: &Rep<F>, maps: &BTreeMap<Vertex, Mat<F>>) -> Result<()> {
        for (&v, m) in maps {
            let want = (cod.dim(v)?, dom.dim(v)?);
            if m.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "map at {} has shape {:?}, expected {:?}",
                    dom.quiver().vertex_label(v),
                    m.shape(),
                    want
                )));
            }
        }
        Ok(())
    }

    /// Commutativity `N(α) f_x = f_y M(α)` on the listed arrows, reading
    /// missing vertices through `value`.
    fn check_commutes(
        dom: &Rep<F>,
        cod: &Rep<F>,
        arrows: impl IntoIterator<Item = crate::quiver::Arrow>,
        value: impl Fn(Vertex) -> Result<Mat<F>>,
    ) -> Result<()> {
        for a in arrows {
            let lhs = cod.arrow_arc(a)?.mul(&value(a.src)?);
            let rhs = value(a.dst)?.mul(&*dom.arrow_arc(a)?);
            if lhs != rhs {
                return Err(Error::NotAMorphism(format!(
                    "square at {} does not commute",
                    dom.quiver().arrow_label(a)
                )));
            }
        }
        Ok(())
    }

    /// A morphism given on finitely many vertices and zero elsewhere.
    pub fn explicit(dom: &Rep<F>, cod: &Rep<F>, maps: BTreeMap<Vertex, Mat<F>>) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        Self::check_shapes(dom, cod, &maps)?;
        let q = dom.quiver().clone();
        let arrows: BTreeSet<_> = maps.keys().flat_map(|&v| q.out_arrows(v).into_iter().chain(q.in_arrows(v))).collect();
        let value = |v: Vertex| -> Result<Mat<F>> {
            Ok(maps.get(&v).cloned().unwrap_or(Mat::zeros(cod.dim(v)?, dom.dim(v)?)))
        };
        Self::check_commutes(dom, cod, arrows, value)?;
        Ok(Self::raw(dom, cod, MorphKind::Explicit(maps)))
    }

    /// A morphism known on a window and determined by it; values elsewhere
    /// are obtained by solving the commutativity equations on larger windows.
    pub fn from_window(dom: &Rep<F>, cod: &Rep<F>, maps: BTreeMap<Vertex, Mat<F>>, budget: Budget) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        Self::check_shapes(dom, cod, &maps)?;
        let q = dom.quiver().clone();
        let arrows: Vec<_> = maps
            .keys()
            .flat_map(|&v| q.out_arrows(v))
            .filter(|a| maps.contains_key(&a.dst))
            .collect();
        Self::check_commutes(dom, cod, arrows, |v| Ok(maps[&v].clone()))?;
        Ok(Self::raw(dom, cod, MorphKind::Window(maps, budget)))
    }

    /// The morphism sending generators `g_j ∈ dom(c_j)` to `images[j]`. The
    /// generators must generate `dom`.
    pub fn from_generators(dom: &Rep<F>, cod: &Rep<F>, gens: Vec<(Vertex, Vec<F>)>, images: Vec<Vec<F>>) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        if gens.len() != images.len() {
            return Err(Error::DimensionMismatch("one image per generator".into()));
        }
        for ((v, g), y) in gens.iter().zip(&images) {
            if g.len() != dom.dim(*v)? || y.len() != cod.dim(*v)? {
                return Err(Error::DimensionMismatch(format!(
                    "generator data at {} has the wrong length",
                    dom.quiver().vertex_label(*v)
                )));
            }
        }
        Ok(Self::raw(dom, cod, MorphKind::FromGenerators { gens, images }))
    }

    /// The morphism `f` with `φ_j ∘ f = ψ_j` for cogenerating functionals
    /// `φ_j` on `cod(s_j)` and functionals `ψ_j` on `dom(s_j)`.
    pub fn to_cogenerators(
        dom: &Rep<F>,
        cod: &Rep<F>,
        cogens: Vec<(Vertex, Vec<F>)>,
        functionals: Vec<Vec<F>>,
    ) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        if cogens.len() != functionals.len() {
            return Err(Error::DimensionMismatch("one functional per cogenerator".into()));
        }
        for ((v, phi), psi) in cogens.iter().zip(&functionals) {
            if phi.len() != cod.dim(*v)? || psi.len() != dom.dim(*v)? {
                return Err(Error::DimensionMismatch(format!(
                    "cogenerator data at {} has the wrong length",
                    dom.quiver().vertex_label(*v)
                )));
            }
        }
        Ok(Self::raw(dom, cod, MorphKind::ToCogenerators { cogens, functionals }))
    }

    /// The morphism between sums of projectives (or injectives) described by
    /// a path matrix.
    pub fn from_path_matrix(q: &Arc<crate::quiver::Quiver>, pm: &PathMatrix<F>) -> Result<Self> {
        let make = |vs: &[Vertex]| -> Result<Rep<F>> {
            let parts = vs
                .iter()
                .map(|&v| match pm.side() {
                    Side::Projective => Rep::projective(q, v),
                    Side::Injective => Rep::injective(q, v),
                })
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Ok(Rep::zero(q));
            }
            Rep::direct_sum(q, parts)
        };
        let dom = make(pm.domain())?;
        let cod = make(pm.codomain())?;
        Ok(Self::raw(&dom, &cod, MorphKind::PathMatrix(pm.clone())))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism<F>) -> Result<Self> {
        if !self.codomain().ptr_eq(g.domain()) && !self.codomain().quiver().same_as(g.domain().quiver()) {
            return Err(Error::Malformed("morphisms do not compose".into()));
        }
        match (self.kind(), g.kind()) {
            (MorphKind::Identity, _) => return Ok(Self::raw(self.domain(), g.codomain(), g.kind().clone())),
            (_, MorphKind::Identity) => return Ok(Self::raw(self.domain(), g.codomain(), self.kind().clone())),
            _ => {}
        }
        Ok(Self::raw(self.domain(), g.codomain(), MorphKind::Compose(self.clone(), g.clone())))
    }

    /// `Σ c_i f_i`; all terms share domain and codomain.
    pub fn combination(dom: &Rep<F>, cod: &Rep<F>, terms: Vec<(F, Morphism<F>)>) -> Result<Self> {
        Self::same_quiver(dom, cod)?;
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        if terms.is_empty() {
            return Ok(Self::raw(dom, cod, MorphKind::Zero));
        }
        Ok(Self::raw(dom, cod, MorphKind::Combination(terms)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::combination(self.domain(), self.codomain(), vec![(F::one(), self.clone()), (F::one(), other.clone())])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::combination(self.domain(), self.codomain(), vec![(F::one(), self.clone()), (-F::one(), other.clone())])
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::raw(self.domain(), self.codomain(), MorphKind::Combination(vec![(c.clone(), self.clone())]))
    }

    /// Pointwise inverse of an isomorphism (errors surface on evaluation).
    pub fn inverse(&self) -> Self {
        Self::raw(self.codomain(), self.domain(), MorphKind::Inverse(self.clone()))
    }

    /// Inclusion of the sub object of a glued representation.
    pub fn glue_in(m: &Rep<F>) -> Result<Self> {
        match m.node() {
            RepNode::Glue { sub, .. } => Ok(Self::raw(sub, m, MorphKind::GlueIn)),
            _ => Err(Error::Malformed("not a glued representation".into())),
        }
    }

    /// Projection of a glued representation onto its quotient.
    pub fn glue_out(m: &Rep<F>) -> Result<Self> {
        match m.node() {
            RepNode::Glue { quot, .. } => Ok(Self::raw(m, quot, MorphKind::GlueOut)),
            _ => Err(Error::Malformed("not a glued representation".into())),
        }
    }

    pub fn sum_in(m: &Rep<F>, i: usize) -> Result<Self> {
        match m.node() {
            RepNode::DirectSum(p) if i < p.len() => Ok(Self::raw(&p[i], m, MorphKind::SumIn(i))),
            _ if i == 0 => Ok(Self::identity(m)),
            _ => Err(Error::OutOfRange(format!("no summand {i}"))),
        }
    }

    pub fn sum_out(m: &Rep<F>, i: usize) -> Result<Self> {
        match m.node() {
            RepNode::DirectSum(p) if i < p.len() => Ok(Self::raw(m, &p[i], MorphKind::SumOut(i))),
            _ if i == 0 => Ok(Self::identity(m)),
            _ => Err(Error::OutOfRange(format!("no summand {i}"))),
        }
    }

    /// `M_Ω → M`, a morphism when `Ω` is successor-closed in the support.
    pub fn restrict_in(r: &Rep<F>) -> Result<Self> {
        match r.node() {
            RepNode::Restrict(m, _) => Ok(Self::raw(r, m, MorphKind::RestrictIn)),
            _ => Err(Error::Malformed("not a restriction".into())),
        }
    }

    /// `M → M_Ω`, a morphism when `Ω` is predecessor-closed in the support.
    pub fn restrict_out(r: &Rep<F>) -> Result<Self> {
        match r.node() {
            RepNode::Restrict(m, _) => Ok(Self::raw(m, r, MorphKind::RestrictOut)),
            _ => Err(Error::Malformed("not a restriction".into())),
        }
    }

    /// `f_Ω: M_Ω → N_Ω` for restrictions to the same vertex set.
    pub fn restricted(&self, dom: &Rep<F>, cod: &Rep<F>) -> Result<Self> {
        match (dom.node(), cod.node()) {
            (RepNode::Restrict(m, _), RepNode::Restrict(n, _))
                if m.ptr_eq(self.domain()) && n.ptr_eq(self.codomain()) =>
            {
                Ok(Self::raw(dom, cod, MorphKind::Restricted(self.clone())))
            }
            _ => Err(Error::Malformed("restricted morphism needs restrictions of its ends".into())),
        }
    }

    pub fn kernel_in(k: &Rep<F>) -> Result<Self> {
        match k.node() {
            RepNode::Kernel(f) => Ok(Self::raw(k, f.domain(), MorphKind::KernelIn)),
            _ => Err(Error::Malformed("not a kernel".into())),
        }
    }

    pub fn image_in(i: &Rep<F>) -> Result<Self> {
        match i.node() {
            RepNode::Image(f) => Ok(Self::raw(i, f.codomain(), MorphKind::ImageIn)),
            _ => Err(Error::Malformed("not an image".into())),
        }
    }

    pub fn image_out(i: &Rep<F>) -> Result<Self> {
        match i.node() {
            RepNode::Image(f) => Ok(Self::raw(f.domain(), i, MorphKind::ImageOut)),
            _ => Err(Error::Malformed("not an image".into())),
        }
    }

    pub fn cokernel_out(c: &Rep<F>) -> Result<Self> {
        match c.node() {
            RepNode::Cokernel(f) => Ok(Self::raw(f.codomain(), c, MorphKind::CokernelOut)),
            _ => Err(Error::Malformed("not a cokernel".into())),
        }
    }

    /// The factorisation `X → ker f` of `g: X → dom f` with `f ∘ g = 0`.
    pub fn kernel_lift(k: &Rep<F>, g: &Morphism<F>) -> Result<Self> {
        match k.node() {
            RepNode::Kernel(_) => Ok(Self::raw(g.domain(), k, MorphKind::KernelLift(g.clone()))),
            _ => Err(Error::Malformed("not a kernel".into())),
        }
    }

    /// The factorisation `coker f → Y` of `g: cod f → Y` with `g ∘ f = 0`.
    pub fn cokernel_descent(c: &Rep<F>, g: &Morphism<F>) -> Result<Self> {
        match c.node() {
            RepNode::Cokernel(_) => Ok(Self::raw(c, g.codomain(), MorphKind::CokernelDescent(g.clone()))),
            _ => Err(Error::Malformed("not a cokernel".into())),
        }
    }

    /// `D f: D N → D M` on the opposite quiver.
    pub fn dual(&self) -> Self {
        if let MorphKind::Dual(inner) = self.kind() {
            return inner.clone();
        }
        Self::raw(&self.codomain().dual(), &self.domain().dual(), MorphKind::Dual(self.clone()))
    }

    /// Vertices where the data of this morphism lives.
    pub fn anchor_hint(&self) -> Vec<Vertex> {
        match self.kind() {
            MorphKind::Explicit(m) | MorphKind::Window(m, _) => m.keys().copied().collect(),
            MorphKind::FromGenerators { gens, .. } => gens.iter().map(|g| g.0).collect(),
            MorphKind::ToCogenerators { cogens, .. } => cogens.iter().map(|g| g.0).collect(),
            MorphKind::Compose(a, b) => a.anchor_hint().into_iter().chain(b.anchor_hint()).collect(),
            MorphKind::Combination(t) => t.iter().flat_map(|(_, f)| f.anchor_hint()).collect(),
            MorphKind::Inverse(f)
            | MorphKind::Restricted(f)
            | MorphKind::KernelLift(f)
            | MorphKind::CokernelDescent(f)
            | MorphKind::Dual(f) => f.anchor_hint(),
            MorphKind::PathMatrix(pm) => pm.domain().iter().chain(pm.codomain()).copied().collect(),
            _ => Vec::new(),
        }
    }

    /// The matrix `f_v: dom(v) → cod(v)`.
    pub fn at(&self, v: Vertex) -> Result<Mat<F>> {
        Ok((*self.at_arc(v)?).clone())
    }

    pub(crate) fn at_arc(&self, v: Vertex) -> Result<Arc<Mat<F>>> {
        if let Some(m) = self.0.cache.lock().get(&v) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.compute(v)?);
        self.0.cache.lock().insert(v, m.clone());
        Ok(m)
    }

    /// True if `f_v` vanishes on every listed vertex.
    pub fn vanishes_on<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<bool> {
        for &v in vs {
            if !self.at_arc(v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True if both morphisms agree on every listed vertex.
    pub fn agrees_on<'a>(&self, other: &Self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<bool> {
        for &v in vs {
            if self.at_arc(v)? != other.at_arc(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn compute(&self, v: Vertex) -> Result<Mat<F>> {
        let (dom, cod) = (self.domain(), self.codomain());
        let (m, n) = (dom.dim(v)?, cod.dim(v)?);
        let zero = || Mat::zeros(n, m);
        if m == 0 || n == 0 {
            return Ok(zero());
        }
        Ok(match self.kind() {
            MorphKind::Zero => zero(),
            MorphKind::Identity => Mat::identity(m),
            MorphKind::Explicit(maps) => maps.get(&v).cloned().unwrap_or_else(zero),
            MorphKind::Window(maps, budget) => match maps.get(&v) {
                Some(x) => x.clone(),
                None => self.extend_window(maps, budget, v)?,
            },
            MorphKind::Compose(f, g) => g.at_arc(v)?.mul(&*f.at_arc(v)?),
            MorphKind::Combination(terms) => {
                let mut acc = zero();
                for (c, f) in terms {
                    acc = acc.add(&f.at_arc(v)?.scale(c));
                }
                acc
            }
            MorphKind::Inverse(f) => f.at_arc(v)?.inverse().ok_or_else(|| {
                Error::NotAMorphism(format!("not invertible at {}", dom.quiver().vertex_label(v)))
            })?,
            MorphKind::PathMatrix(pm) => pm.eval(dom.quiver(), v)?,
            MorphKind::FromGenerators { gens, images } => {
                // Solve f_v · [M(α) | g_j] = [N(α) f_u | y_j] over arrows α: u → v.
                let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
                for a in dom.quiver().in_arrows(v) {
                    if dom.dim(a.src)? == 0 {
                        continue;
                    }
                    lhs.push(dom.arrow_arc(a)?.as_ref().clone());
                    rhs.push(cod.arrow_arc(a)?.mul(&*self.at_arc(a.src)?));
                }
                for ((gv, g), y) in gens.iter().zip(images) {
                    if *gv == v {
                        lhs.push(Mat::from_columns(m, &[g.clone()]));
                        rhs.push(Mat::from_columns(n, &[y.clone()]));
                    }
                }
                let a = stack_cols(&lhs, m);
                let b = stack_cols(&rhs, n);
                let x = a.transpose().solve_mat(&b.transpose()).ok_or_else(|| {
                    Error::NotAMorphism(format!("generator images violate relations at {}", dom.quiver().vertex_label(v)))
                })?;
                if a.rank() < m {
                    return Err(Error::NotAMorphism(format!(
                        "generators do not generate at {}",
                        dom.quiver().vertex_label(v)
                    )));
                }
                x.transpose()
            }
            MorphKind::ToCogenerators { cogens, functionals } => {
                // Solve [N(α); φ_j] · f_v = [f_w M(α); ψ_j] over arrows α: v → w.
                let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
                for a in dom.quiver().out_arrows(v) {
                    if cod.dim(a.dst)? == 0 {
                        continue;
                    }
                    lhs.push(cod.arrow_arc(a)?.as_ref().clone());
                    rhs.push(self.at_arc(a.dst)?.mul(&*dom.arrow_arc(a)?));
                }
                for ((sv, phi), psi) in cogens.iter().zip(functionals) {
                    if *sv == v {
                        lhs.push(Mat::from_rows(vec![phi.clone()], n)?);
                        rhs.push(Mat::from_rows(vec![psi.clone()], m)?);
                    }
                }
                let a = stack_rows(&lhs, n);
                let b = stack_rows(&rhs, m);
                if a.rank() < n {
                    return Err(Error::NotAMorphism(format!(
                        "functionals do not cogenerate at {}",
                        dom.quiver().vertex_label(v)
                    )));
                }
                a.solve_mat(&b).ok_or_else(|| {
                    Error::NotAMorphism(format!("functionals violate relations at {}", dom.quiver().vertex_label(v)))
                })?
            }
            MorphKind::GlueIn => {
                let mut x = zero();
                x.paste(0, 0, &Mat::identity(m));
                x
            }
            MorphKind::GlueOut => {
                let mut x = zero();
                x.paste(0, m - n, &Mat::identity(n));
                x
            }
            MorphKind::SumIn(i) | MorphKind::SumOut(i) => {
                let whole = if matches!(self.kind(), MorphKind::SumIn(_)) { cod } else { dom };
                let RepNode::DirectSum(parts) = whole.node() else { unreachable!("sum node") };
                let mut off = 0;
                for p in &parts[..*i] {
                    off += p.dim(v)?;
                }
                let mut x = zero();
                match self.kind() {
                    MorphKind::SumIn(_) => x.paste(off, 0, &Mat::identity(m)),
                    _ => x.paste(0, off, &Mat::identity(n)),
                }
                x
            }
            MorphKind::RestrictIn | MorphKind::RestrictOut => Mat::identity(m),
            MorphKind::Restricted(f) => f.at(v)?,
            MorphKind::KernelIn | MorphKind::ImageIn => match &dom.space(v)?.aux {
                Aux::Sub(s) => s.basis().clone(),
                _ => unreachable!("subspace node"),
            },
            MorphKind::ImageOut | MorphKind::KernelLift(_) => {
                let (target, g) = match self.kind() {
                    MorphKind::ImageOut => {
                        let RepNode::Image(f) = cod.node() else { unreachable!("image node") };
                        (cod, f.at_arc(v)?)
                    }
                    MorphKind::KernelLift(g) => (cod, g.at_arc(v)?),
                    _ => unreachable!(),
                };
                match &target.space(v)?.aux {
                    Aux::Sub(s) => s.coords_of_columns(&g).ok_or_else(|| {
                        Error::NotAMorphism(format!("does not factor at {}", dom.quiver().vertex_label(v)))
                    })?,
                    _ => unreachable!("subspace node"),
                }
            }
            MorphKind::CokernelOut => match &cod.space(v)?.aux {
                Aux::QuotOf(q) => q.projection().clone(),
                _ => unreachable!("quotient node"),
            },
            MorphKind::CokernelDescent(g) => match &dom.space(v)?.aux {
                Aux::QuotOf(q) => g.at_arc(v)?.mul(&q.section()),
                _ => unreachable!("quotient node"),
            },
            MorphKind::Dual(f) => f.at_arc(v)?.transpose(),
        })
    }

    fn extend_window(&self, maps: &BTreeMap<Vertex, Mat<F>>, budget: &Budget, v: Vertex) -> Result<Mat<F>> {
        let (dom, cod) = (self.domain(), self.codomain());
        let q = dom.quiver();
        let base: BTreeSet<Vertex> = maps.keys().copied().collect();
        let Some(core) = connect(q, &base, v, 100_000) else {
            return Err(Error::Uncertified(format!("{} is not connected to the window", q.vertex_label(v))));
        };
        let mut margin = 0;
        loop {
            let seeds: Vec<Vertex> = core.iter().copied().collect();
            let verts = if margin == 0 { core.clone() } else { window(q, &seeds, margin).vertices };
            let sol = hom_on_vertices(dom, cod, &verts, maps)?
                .ok_or_else(|| Error::NotAMorphism("window values do not extend".into()))?;
            let determined = |w: &Vertex| sol.kernel.iter().all(|k| k[w].is_zero());
            if determined(&v) {
                let mut cache = self.0.cache.lock();
                for w in verts.iter().filter(|w| !maps.contains_key(w) && determined(w)) {
                    cache.entry(*w).or_insert_with(|| Arc::new(sol.particular[w].clone()));
                }
                return Ok(sol.particular[&v].clone());
            }
            margin += budget.step;
            if margin > budget.max_radius {
                return Err(Error::Uncertified(format!(
                    "value at {} is not determined by the window",
                    q.vertex_label(v)
                )));
            }
        }
    }
}
