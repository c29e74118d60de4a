//! Declaration-text emission: the inverse of the parser, used by `gen`
//! and for round-tripping documents.

use num_traits::ToPrimitive;

use trop_core::plfun::PLFunction;
use trop_core::rational::Rational;
use trop_core::semiring::TropValue;
use trop_core::hypersurface::TropPolynomial;

use crate::parser::InputDocument;

fn q(v: &Rational) -> String {
    v.to_string()
}

fn t(v: &TropValue) -> String {
    v.to_string()
}

/// Emits a function as a `pl` block in breakpoint form.
pub fn emit_pl(name: &str, f: &PLFunction) -> String {
    let mut points: Vec<(Rational, Rational)> = f
        .breakpoints()
        .iter()
        .map(|b| (b.clone(), f.eval_unchecked(b)))
        .collect();
    if points.is_empty() {
        // anchor point; keep it inside the window when one is present
        let x = match f.window() {
            Some(w) => (w.lo() + w.hi()) / Rational::from_integer(2.into()),
            None => Rational::from_integer(0.into()),
        };
        points.push((x.clone(), f.eval_unchecked(&x)));
    }
    let mut s = format!("pl {name} {{ left_slope={} points=", q(f.left_tail_slope()));
    for (x, y) in &points {
        s.push_str(&format!("({},{})", q(x), q(y)));
    }
    s.push_str(&format!(" right_slope={}", q(f.right_tail_slope())));
    if let Some(w) = f.window() {
        s.push_str(&format!(" window={},{}", q(w.lo()), q(w.hi())));
    }
    s.push_str(" }");
    s
}

/// Emits a convex function as an `entire` block: the monomials are the
/// affine pieces themselves (exact for tropical entire functions).
pub fn emit_entire(name: &str, f: &PLFunction) -> String {
    assert!(f.is_entire(), "entire form needs a convex function");
    let mut monomials: Vec<(Rational, Rational)> = Vec::new();
    // slope/intercept of each cell, reconstructed through breakpoints
    let mut x_values: Vec<Rational> = Vec::new();
    if f.breakpoints().is_empty() {
        x_values.push(Rational::from_integer(0.into()));
    } else {
        x_values.extend(f.breakpoints().iter().cloned());
    }
    let slopes = f.slopes();
    for (i, slope) in slopes.iter().enumerate() {
        let anchor_x = &x_values[i.min(x_values.len() - 1)];
        let value = f.eval_unchecked(anchor_x);
        let intercept = value - slope * anchor_x;
        monomials.push((slope.clone(), intercept));
    }
    let mut s = format!("entire {name} {{ monomials=");
    for (slope, coeff) in &monomials {
        s.push_str(&format!("({},{})", q(slope), q(coeff)));
    }
    s.push_str(" }");
    s
}

/// Emits a polynomial block; requires integer exponents.
pub fn emit_poly(name: &str, p: &TropPolynomial) -> String {
    let mut s = format!(
        "poly {name} {{ nvars={} degree={} terms=",
        p.nvars(),
        p.degree()
    );
    for (index, coeff) in p.terms() {
        let idx: Vec<String> = index
            .iter()
            .map(|e| {
                e.to_integer()
                    .to_u64()
                    .expect("emission needs integer exponents")
                    .to_string()
            })
            .collect();
        s.push_str(&format!("([{}],{})", idx.join(","), q(coeff)));
    }
    s.push_str(" }");
    s
}

/// Emits a whole document; functions declared in `entire` form keep it.
pub fn emit_document(doc: &InputDocument) -> String {
    let mut out = String::new();
    for (name, f) in &doc.functions {
        if let Some(monomials) = doc.entire_form.get(name) {
            let mut s = format!("entire {name} {{ monomials=");
            for (slope, coeff) in monomials {
                s.push_str(&format!("({},{})", q(slope), q(coeff)));
            }
            s.push_str(" }");
            out.push_str(&s);
        } else {
            out.push_str(&emit_pl(name, f));
        }
        out.push('\n');
    }
    for (name, m) in &doc.matrices {
        let rows: Vec<String> = m
            .entries()
            .iter()
            .map(|row| row.iter().map(t).collect::<Vec<_>>().join(","))
            .collect();
        out.push_str(&format!("mat {name} {{ rows=[{}] }}\n", rows.join(";")));
    }
    for (name, p) in &doc.polynomials {
        out.push_str(&emit_poly(name, p));
        out.push('\n');
    }
    for (name, components) in &doc.curve_components {
        out.push_str(&format!(
            "curve {name} {{ n={} components={} }}\n",
            components.len() - 1,
            components.join(",")
        ));
    }
    for (name, inst) in &doc.instances {
        out.push_str(&format!(
            "instance {name} {{ curve={} polys={}",
            inst.curve,
            inst.polys.join(",")
        ));
        if let Some(c) = &inst.c {
            out.push_str(&format!(" c={}", q(c)));
        }
        if let Some(grid) = &inst.grid {
            // re-emit as start:stop:step when the grid is arithmetic
            if grid.len() >= 2 {
                let step = &grid[1] - &grid[0];
                out.push_str(&format!(
                    " grid={}:{}:{}",
                    q(&grid[0]),
                    q(grid.last().unwrap()),
                    q(&step)
                ));
            } else {
                out.push_str(&format!(" grid={}:{}:1", q(&grid[0]), q(&grid[0])));
            }
        }
        if let Some(tol) = &inst.tol {
            out.push_str(&format!(" tol={}", q(tol)));
        }
        out.push_str(" }\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_document;
    use trop_core::rational::rat_int;

    #[test]
    fn round_trip_reparses_to_equal_document() {
        let text = "\
entire f0 { monomials=(0,0) }
entire f1 { monomials=(1,0)(0,0) }
pl g { left_slope=-1 points=(0,1)(2,3) right_slope=1/2 window=-4,6 }
mat a { rows=[1,-inf;-inf,1] }
poly p { nvars=2 degree=1 terms=([0,1],0)([1,0],-1/2) }
curve c { n=1 components=f0,f1 }
instance i { curve=c polys=p,p c=1 grid=1:10:1 tol=1/20 }
";
        let doc = parse_document(text).unwrap();
        let emitted = emit_document(&doc);
        let doc2 = parse_document(&emitted).unwrap();
        assert_eq!(doc.functions, doc2.functions);
        assert_eq!(doc.matrices, doc2.matrices);
        assert_eq!(doc.polynomials, doc2.polynomials);
        assert_eq!(doc.curves, doc2.curves);
        assert_eq!(doc.instances, doc2.instances);
        // emission is idempotent byte-for-byte
        assert_eq!(emitted, emit_document(&doc2));
    }

    #[test]
    fn entire_emission_is_exact_for_convex_functions() {
        let f = PLFunction::from_monomials(&[
            (rat_int(2), rat_int(-3)),
            (rat_int(0), rat_int(0)),
            (rat_int(-1), rat_int(-1)),
        ])
        .unwrap();
        let text = emit_entire("h", &f);
        let doc = parse_document(&text).unwrap();
        assert!(doc.functions["h"].pl_equal(&f).unwrap());
    }
}
