use lcc_core::cwf::{compose, mk_subst, projection, weaken, Eq, Prod, Subst};
use lcc_core::Obj;
use rand::Rng;

use crate::common::*;
use crate::{Outcome, Pool};

/// `sigma[f][g] = sigma[g . f]` and `t[f][g] = t[g . f]`, syntactically.
pub fn strict(pool: &mut Pool) -> Outcome {
    let mut r = rng(0x5eed_0001);
    let (mut n, mut fails) = (0, Vec::new());
    let (mut dependent, mut moving, mut deep) = (0, 0, 0);
    while n < 1000 {
        let sk = sketch(&mut r);
        let depth = r.gen_range(0..=4);
        let t = gen_tele(&mut r, sk, depth);
        let (f, t1) = { let d = r.gen_range(0..=3); gen_subst(&mut r, &t, d) };
        let (g, t2) = { let d = r.gen_range(0..=3); gen_subst(&mut r, &t1, d) };
        let ty = gen_ty(&mut r, &t, 2, 25);
        let Some(tm) = inhabit(&mut r, &t, &ty, 2) else { continue };
        n += 1;
        dependent += usize::from(matches!(ty.shape, Shape::Sigma { .. } | Shape::Pi { .. }));
        moving += usize::from(f.table.mors.iter().any(|(k, v)| !v.is_gen_named(k)));
        deep += usize::from(t.vars.len() >= 3);
        let gf = compose(&g, &f).expect("composable");
        let (l_ty, r_ty) = (g.ty(&f.ty(&ty.obj).unwrap()).unwrap(), gf.ty(&ty.obj).unwrap());
        let (l_tm, r_tm) = (g.tm(&f.tm(&tm).unwrap()).unwrap(), gf.tm(&tm).unwrap());
        if l_ty != r_ty || l_tm != r_tm {
            fails.push(format!("{} / {tm}", ty.obj));
        }
        if n % 10 == 0 {
            pool.pairs.push((t2.ctx().clone(), l_tm, r_tm));
        }
    }
    Outcome {
        pass: fails.is_empty(),
        detail: format!(
            "{n} triples ({dependent} dependent types, {moving} substitutions moving a variable, {deep} contexts of depth >= 3), {} failures",
            fails.len()
        ),
    }
}

/// One line of evidence per former: instances checked and failures.
pub fn stability(_pool: &mut Pool) -> Outcome {
    let mut r = rng(0x5eed_0002);
    let per = 200;
    let mut counts = [0usize; 5];
    let mut fails: Vec<String> = Vec::new();
    let names = ["1", "x", "Eq", "Sigma", "Pi"];
    while counts.iter().any(|&c| c < per) {
        let sk = sketch(&mut r);
        let depth = r.gen_range(0..=3);
        let t = gen_tele(&mut r, sk, depth);
        let (f, _) = { let d = r.gen_range(0..=3); gen_subst(&mut r, &t, d) };
        let k = counts.iter().enumerate().filter(|c| *c.1 < per).map(|c| c.0).next().unwrap();
        let k = if r.gen_bool(0.5) { k } else { r.gen_range(0..5) };
        let ok = match k {
            0 => f.ty(&Obj::one()).unwrap() == Obj::one(),
            1 => {
                let (a, b) = (gen_ty(&mut r, &t, 1, 12), gen_ty(&mut r, &t, 1, 12));
                let p = Prod { left: a.obj, right: b.obj };
                let q = Prod { left: f.ty(&p.left).unwrap(), right: f.ty(&p.right).unwrap() };
                f.ty(&p.ty()).unwrap() == q.ty()
            }
            2 => {
                let base = plain(t.objects()[r.gen_range(0..t.objects().len())].clone());
                let (Some(s), Some(u)) = (inhabit(&mut r, &t, &base, 2), inhabit(&mut r, &t, &base, 2)) else { continue };
                let e = Eq::new(t.ctx(), &s, &u).unwrap();
                let e2 = Eq { lhs: f.tm(&s).unwrap(), rhs: f.tm(&u).unwrap() };
                f.ty(&e.ty()).unwrap() == e2.ty()
            }
            _ => {
                let dom = gen_ty(&mut r, &t, 1, 12);
                let inner = t.push(&dom).unwrap();
                let tau = gen_ty(&mut r, &inner, 1, 12);
                let ext = inner.ctx();
                let (ext2, w) = weaken(&f, ext).unwrap();
                let former = if k == 3 { sigma_obj } else { pi_obj };
                let here = former(ext, &tau.obj).unwrap();
                if here.size() > 25 {
                    continue;
                }
                f.ty(&here).unwrap() == former(&ext2, &w.ty(&tau.obj).unwrap()).unwrap()
            }
        };
        counts[k] += 1;
        if !ok {
            fails.push(names[k].to_string());
        }
    }
    let shown: Vec<String> = names.iter().zip(counts).map(|(n, c)| format!("{n}:{c}")).collect();
    Outcome { pass: fails.is_empty(), detail: format!("instances {}, failures {:?}", shown.join(" "), fails) }
}

/// `<f, s> . p = f`, `v[<f, s>] = s` and `<p, v> = id`.
pub fn cwf_laws(pool: &mut Pool) -> Outcome {
    let mut r = rng(0x5eed_0003);
    let (mut n, mut fails) = (0, Vec::new());
    while n < 500 {
        let sk = sketch(&mut r);
        let depth = r.gen_range(0..=3);
        let t = gen_tele(&mut r, sk, depth);
        let sigma = gen_ty(&mut r, &t, 2, 25);
        let ext_t = t.push(&sigma).unwrap();
        let ext = ext_t.ctx();
        let (f, target) = { let d = r.gen_range(0..=3); gen_subst(&mut r, &t, d) };
        let Some(s) = inhabit(&mut r, &target, &sigma.transport(&f).unwrap(), 2) else { continue };
        n += 1;
        let fs = mk_subst(&f, ext, &s).unwrap();
        let p = projection(ext).unwrap();
        let v = ext.variable().unwrap().0;
        let laws = [
            compose(&fs, &p).unwrap() == f,
            fs.tm(&v).unwrap() == s,
            mk_subst(&p, ext, &v).unwrap() == Subst::identity(ext),
        ];
        if laws.iter().any(|b| !b) {
            fails.push(format!("{laws:?} at {}", sigma.obj));
        }
        if n % 10 == 0 {
            pool.pairs.push((target.ctx().clone(), fs.tm(&v).unwrap(), s));
        }
    }
    Outcome { pass: fails.is_empty(), detail: format!("{n} instances, {} failures {:?}", fails.len(), fails.first()) }
}
