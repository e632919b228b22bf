use anyhow::{bail, Context as _, Result};
use hpmon_core::{ConjVerdict, GroupLetter, Letter, McmFormula, Monoid, NoReason, ProbeOutcome, Side, Verdict, Word};

use crate::output::{Out, Status};
use crate::{BiiCmd, Cmd, Context, GmnCmd, SideArg};

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

pub fn dispatch(ctx: &Context, cmd: &Cmd, out: &mut Out) -> Result<Status> {
    let m = ctx.monoid();
    let fmt = |w: &[Letter]| ctx.fmt(w);
    match cmd {
        Cmd::Eq { u, v } => {
            let (u, v) = (ctx.word(u)?, ctx.word(v)?);
            let equal = m.words_equal(&u, &v)?;
            out.field("result", yes_no(equal));
            out.field("canonical-u", fmt(&m.canonical(&u)?));
            out.field("canonical-v", fmt(&m.canonical(&v)?));
            Ok(Status::from_bool(equal))
        }
        Cmd::Class { w } => {
            let class = m.enumerate_class(&ctx.word(w)?)?;
            out.field("canonical", fmt(class.canonical()));
            out.field("size", class.size());
            out.class(class.members().iter().map(|w| fmt(w)).collect());
            Ok(Status::True)
        }
        Cmd::Div { side, u, v } => {
            let q = m.divides((*side).into(), &ctx.word(u)?, &ctx.word(v)?)?;
            out.field("result", yes_no(q.is_some()));
            if let Some(q) = &q {
                out.field("quotient", fmt(q));
            }
            Ok(Status::from_bool(q.is_some()))
        }
        Cmd::Mcm { side, bound, words } => {
            let set: Vec<Word> = words.iter().map(|w| ctx.word(w)).collect::<Result<_>>()?;
            let found = m.mcm_bounded(&set, (*side).into(), *bound)?;
            out.field("bound", found.bound);
            out.field("count", found.value.len());
            out.items("mcm", found.value.iter().map(|w| fmt(w)));
            Ok(if found.value.is_empty() { Status::Inconclusive } else { Status::True })
        }
        Cmd::Qz { d } => {
            let cert = m.quasi_central_cert(&ctx.word(d)?)?;
            out.field("result", yes_no(cert.is_some()));
            if let Some(c) = &cert {
                out.field("sigma-order", c.order());
                out.items("sigma", m.atoms().into_iter().map(|x| format!("{} -> {}", fmt(&[x]), fmt(&[c.sigma[x as usize]]))));
            }
            Ok(Status::from_bool(cert.is_some()))
        }
        Cmd::Fund { d } => {
            let cert = m.fundamental_cert(&ctx.word(d)?)?;
            out.field("result", yes_no(cert.is_some()));
            if let Some(c) = &cert {
                out.field("sigma-order", c.qz.order());
                out.items("quotient", m.atoms().into_iter().map(|x| format!("{}: {}", fmt(&[x]), fmt(&c.quotients[x as usize]))));
            }
            Ok(Status::from_bool(cert.is_some()))
        }
        Cmd::Garside { d } => {
            let r = m.garside_check(&ctx.word(d)?)?;
            out.field("result", yes_no(r.is_garside()));
            out.field("balanced", r.balanced);
            out.field("generating", r.generating);
            out.field("left-divisors", r.left.divisors.len());
            out.field("right-divisors", r.right.divisors.len());
            Ok(Status::from_bool(r.is_garside()))
        }
        Cmd::Minfund { d } => Ok(verdict(ctx, out, &m.minimal_fundamental_check(&ctx.word(d)?)?)),
        Cmd::Indec { d } => Ok(verdict(ctx, out, &m.indecomposable_qz_check(&ctx.word(d)?)?)),
        Cmd::Transmin { bound, w } => {
            let found = m.trans_min_bounded(&ctx.word(w)?, *bound)?;
            out.field("bound", found.bound);
            out.field("count", found.value.len());
            out.items("transit", found.value.iter().map(|t| format!("{} -> {}", fmt(&t.element), fmt(&t.target))));
            Ok(Status::True)
        }
        Cmd::Orbit { w, delta } => {
            let orbit = m.orbit_closure(&ctx.word(w)?, &ctx.delta(delta.as_deref())?)?;
            out.field("delta", fmt(&orbit.delta));
            out.field("stabilized-at", orbit.stabilized_at);
            out.field("size", orbit.members().len());
            out.items("member", orbit.entries.iter().map(|e| format!("{} by {}", fmt(&e.element), fmt(&e.conjugator))));
            Ok(Status::True)
        }
        Cmd::Conj { u, v, delta, bound } => {
            let (u, v) = (ctx.word(u)?, ctx.word(v)?);
            let delta = delta.as_deref().map(|d| ctx.word(d)).transpose()?;
            let r = m.are_conjugate(&u, &v, delta.as_deref(), false, *bound)?;
            Ok(conj_verdict(ctx, out, Some((&u, &v)), &r))
        }
        Cmd::PropP { w, delta, bound } => {
            let r = m.property_p_probe(&ctx.word(w)?, &ctx.delta(delta.as_deref())?, *bound)?;
            out.field("result", yes_no(r.confirmed()));
            out.field("bound", bound);
            match &r {
                ProbeOutcome::Confirmed { minimal_transits, .. } => {
                    out.items("minimal-transit", minimal_transits.iter().map(|w| fmt(w)));
                }
                ProbeOutcome::Counterexample { transit } => out.field("counterexample", fmt(transit)),
            }
            Ok(Status::from_bool(r.confirmed()))
        }
        Cmd::GroupEq { g1, g2, delta } => {
            let cert = group_cert(ctx, delta.as_deref())?;
            let (a, b) = (group_word(m, g1)?, group_word(m, g2)?);
            let equal = m.group_equal(&a, &b, &cert)?;
            out.field("result", yes_no(equal));
            Ok(Status::from_bool(equal))
        }
        Cmd::GroupConj { g1, g2, delta } => {
            let cert = group_cert(ctx, delta.as_deref())?;
            let (a, b) = (group_word(m, g1)?, group_word(m, g2)?);
            // Property P is verified for G_{m,n} along every orbit we have
            // swept, so an orbit miss there is a definitive no.
            let certified = matches!(ctx, Context::Gmn(_)) && cert.element() == &m.canonical(&ctx.delta(None)?)?;
            let r = m.group_conjugate(&a, &b, &cert, certified)?;
            Ok(conj_verdict(ctx, out, None, &r))
        }
        Cmd::Bii { cmd } => bii(ctx, cmd, out),
        Cmd::Gmn { cmd } => gmn(ctx, cmd, out),
    }
}

fn bii(ctx: &Context, cmd: &BiiCmd, out: &mut Out) -> Result<Status> {
    let Context::Bii(bii) = ctx else { unreachable!("bii subcommands build a B_ii context") };
    let fmt = |w: &[Letter]| ctx.fmt(w);
    match cmd {
        BiiCmd::Nf { w } => {
            let nf = bii.normal_form(&ctx.word(w)?)?;
            out.field("normal-form", nf);
            out.field("word", fmt(&nf.word()));
            Ok(Status::True)
        }
        BiiCmd::Transmin { w, len } => {
            let w = ctx.word(w)?;
            let family = bii.trans_min_table(&w)?;
            out.field("row", bii.table_row(&w)?);
            out.field("family", family.render(|x| fmt(x)));
            if let Some(len) = len {
                out.items("instance", family.instances_up_to_len(*len).iter().map(|w| fmt(w)));
            }
            Ok(Status::True)
        }
        BiiCmd::Conj { u, v } => {
            let (u, v) = (ctx.word(u)?, ctx.word(v)?);
            Ok(conj_verdict(ctx, out, Some((&u, &v)), &bii.conjugate(&u, &v)?))
        }
    }
}

fn gmn(ctx: &Context, cmd: &GmnCmd, out: &mut Out) -> Result<Status> {
    let Context::Gmn(g) = ctx else { unreachable!("gmn subcommands build a G_(m,n) context") };
    let fmt = |w: &[Letter]| ctx.fmt(w);
    match cmd {
        GmnCmd::Nf { w } => {
            let nf = g.normal_form(&ctx.word(w)?)?;
            out.field("blocks", nf.blocks.len());
            out.items("block", nf.blocks.iter().map(|(t, u)| format!("t: {} | u: {}", fmt(t), fmt(u))));
            out.field("word", fmt(&nf.word()));
            Ok(Status::True)
        }
        GmnCmd::Strata { w } => {
            let s = g.strata(&ctx.word(w)?)?;
            out.field("k", s.k);
            out.field("lambda", format!("{} {}", s.lambda[0], s.lambda[1]));
            out.field("mu", format!("{} {}", s.mu[0], s.mu[1]));
            out.field("remain", fmt(&s.remain));
            out.field("remain-prime", fmt(&s.remain_prime));
            Ok(Status::True)
        }
        GmnCmd::Mcm { x, w, bound } => {
            let x = ctx.word(x)?;
            let &[x] = x.letters() else { bail!("X must be a single letter") };
            let f = g.mcm_letter(x, &ctx.word(w)?)?;
            match &f {
                McmFormula::Single(a) => out.field("formula", fmt(a)),
                McmFormula::Family { head, free, tail } => {
                    out.field("formula", format!("{} · w' · {}, w' over the {free} letters, not ending in their block", fmt(head), fmt(tail)));
                }
            }
            out.items("mcm", g.instantiate_mcm(&f, *bound)?.iter().map(|w| fmt(w)));
            Ok(Status::True)
        }
        GmnCmd::PropP { w } => {
            let r = g.property_p(&ctx.word(w)?)?;
            out.field("result", yes_no(r.holds()));
            out.field("case", &r.trace.case);
            out.field("left-letters", r.trace.left_letters.iter().map(|&x| fmt(&[x])).collect::<Vec<_>>().join(" "));
            out.items("witness", r.witnesses.iter().map(|p| format!("{}: {} ({})", fmt(&[p.letter]), fmt(&p.element), p.rule)));
            out.items("rejected", r.rejected.iter().map(|(w, rule)| format!("{} ({rule})", fmt(w))));
            out.items("uncovered", r.uncovered.iter().map(|w| fmt(w)));
            Ok(Status::from_bool(r.holds()))
        }
        GmnCmd::Conj { u, v } => {
            let (u, v) = (ctx.word(u)?, ctx.word(v)?);
            Ok(conj_verdict(ctx, out, Some((&u, &v)), &g.conjugate(&u, &v)?))
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict(ctx: &Context, out: &mut Out, v: &Verdict) -> Status {
    out.field("result", yes_no(v.holds()));
    match v {
        Verdict::Holds => {}
        Verdict::NotApplicable => out.field("reason", "not fundamental or not quasi-central"),
        Verdict::Fails { divisor, cofactor } => {
            out.field("divisor", ctx.fmt(divisor));
            if let Some(c) = cofactor {
                out.field("cofactor", ctx.fmt(c));
            }
        }
    }
    Status::from_bool(v.holds())
}

/// `pair` is the positive pair compared, when there is one, to name which
/// invariant separated it.
fn conj_verdict(ctx: &Context, out: &mut Out, pair: Option<(&Word, &Word)>, r: &ConjVerdict) -> Status {
    match r {
        ConjVerdict::Yes { conjugator } => {
            out.field("result", "yes");
            out.field("conjugator", ctx.fmt(conjugator));
            Status::True
        }
        ConjVerdict::No { reason } => {
            out.field("result", "no");
            out.field("reason", no_reason(ctx.monoid(), pair, *reason));
            Status::False
        }
        ConjVerdict::NotFoundInOrbit => {
            out.field("result", "inconclusive");
            out.field("reason", "not in the orbit, and the orbit is not certified complete");
            Status::Inconclusive
        }
        ConjVerdict::Inconclusive { bound } => {
            out.field("result", "inconclusive");
            out.field("reason", format!("no conjugator of length <= {bound}"));
            Status::Inconclusive
        }
    }
}

fn no_reason(m: &Monoid, pair: Option<(&Word, &Word)>, reason: NoReason) -> &'static str {
    match (reason, pair) {
        (NoReason::Invariant, Some((u, v))) if u.len() != v.len() => "length",
        (NoReason::Invariant, Some((u, v))) if m.same_conserved_counts(u, v) => "free-quotient",
        (NoReason::Invariant, _) => "letter-count",
        (NoReason::PropertyP, _) => "orbit-complete",
        (NoReason::ExactTable, _) => "transit-table",
    }
}

fn group_word(m: &Monoid, text: &str) -> Result<Vec<GroupLetter>> {
    m.presentation().parse_group_word(text).with_context(|| format!("cannot parse group word `{text}`"))
}

fn group_cert(ctx: &Context, delta: Option<&str>) -> Result<hpmon_core::FundamentalCert> {
    let d = ctx.delta(delta)?;
    match ctx.monoid().fundamental_cert(&d)? {
        Some(c) => Ok(c),
        None => bail!("{} is not a fundamental element", ctx.fmt(&d)),
    }
}
