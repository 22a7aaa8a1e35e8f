//! Built-in programs for the noninterference and soundness checks.

use crate::calculi::Calculus;

/// Noninterference programs in source form. Each declares its hole and
/// result type in header lines.
pub const NONINTERFERENCE: &[(Calculus, &str)] = &[
    (Calculus::Moggi, "-- hole x : T Bool\n-- type Bool\n(\\y:T Bool. tt) x"),
    (Calculus::Moggi, "-- hole x : T Bool\n-- type Bool\nif tt then ff else (\\y:T Bool. tt) x"),
    (Calculus::Moggi, "-- hole x : T Bool\n-- type Bool\nfst (tt, x)"),
    (Calculus::Moggi, "-- hole x : T Bool\n-- type Bool\n(\\f:T Bool -> Bool. f x) (\\y:T Bool. ff)"),
    (Calculus::Moggi, "-- hole x : T Bool\n-- type Bool\ncase (inr x : Bool + T Bool) of inl a => a | inr b => tt"),
    (Calculus::Moggi, "-- hole x : T (Bool * Bool)\n-- type Bool\n(\\p:T (Bool * Bool). ff) x"),
    (Calculus::DaviesPfenning, "-- hole x : BoolCo\n-- type Box Bool\nbox tt"),
    (Calculus::DaviesPfenning, "-- hole x : BoolCo\n-- type Box (Bool * Bool)\n(\\c:BoolCo. box (tt, ff)) x"),
    (Calculus::DaviesPfenning, "-- hole x : BoolCo\n-- type Box Unit\n(\\p:BoolCo * BoolCo. box unit) (x, if x then tt else ff)"),
    (Calculus::DaviesPfenning, "-- hole x : BoolCo\n-- type Box Bool\nfst (box tt, if x then x else tt)"),
    (
        Calculus::DaviesPfenning,
        "-- hole x : BoolCo\n-- type Box (Bool + Unit)\n(\\f:BoolCo -> BoolCo. (\\c:BoolCo. box (inl tt : Bool + Unit)) (f x)) (\\b:BoolCo. b)",
    ),
    (Calculus::DaviesPfenning, "-- hole x : BoolCo\n-- type Box Bool\nlet box u = box ff in (\\c:BoolCo. box u) x"),
    (Calculus::Dcc, "-- hole x : T[H] Bool\n-- type T[L] Bool\nret[L] tt"),
    (Calculus::Dcc, "-- hole x : T[H] Bool\n-- type T[L] Bool\n(\\y:T[H] Bool. ret[L] ff) x"),
    (Calculus::Dcc, "-- hole x : T[H] Bool\n-- type T[L] Bool\nlet y = ret[L] tt in ret[L] y"),
    (Calculus::Dcc, "-- hole x : T[H] Bool\n-- type T[L] Bool\nfst (ret[L] tt, x)"),
    (
        Calculus::Dcc,
        "-- hole x : T[H] Bool\n-- type T[L] Bool\n(\\f:T[H] Bool -> T[L] Bool. f x) (\\z:T[H] Bool. ret[L] tt)",
    ),
    (Calculus::Dcc, "-- hole x : T[H] Bool\n-- type T[L] Bool\nif tt then ret[L] tt else (\\z:T[H] Bool. ret[L] ff) x"),
    (Calculus::Sealing, "-- hole x : Seal[H] Bool\n-- type Bool\n(\\y:Seal[H] Bool. tt) x"),
    (Calculus::Sealing, "-- hole x : Seal[H] Bool\n-- type Bool\nfst (ff, x)"),
    (Calculus::Sealing, "-- hole x : Seal[H] Bool\n-- type Bool\nif tt then tt else (\\y:Seal[H] Bool. ff) x"),
    (Calculus::Sealing, "-- hole x : Seal[H] Bool\n-- type Bool\n(\\f:Seal[H] Bool -> Bool. f x) (\\y:Seal[H] Bool. tt)"),
    (
        Calculus::Sealing,
        "-- hole x : Seal[H] Bool\n-- observers L\n-- type Bool\n(\\y:Seal[H] Bool. unseal[L] (seal[L] tt)) x",
    ),
    (
        Calculus::Sealing,
        "-- hole x : Seal[H] Bool\n-- type Bool\n(\\y:Seal[H] Bool. (\\z:Seal[H] Bool. ff) (seal[H] (unseal[H] y))) x",
    ),
];

/// Closed terms for the soundness check, typed with no observers.
pub const SOUNDNESS: &[(Calculus, &str)] = &[
    (Calculus::Moggi, "if tt then ff else tt"),
    (Calculus::Moggi, "(\\x:Bool. if x then ff else tt) tt"),
    (Calculus::Moggi, "let x = ret tt in ret (x, ff)"),
    (Calculus::Moggi, "fst ((\\p:Bool * Bool. p) (ff, tt))"),
    (
        Calculus::Moggi,
        "case (inl tt : Bool + Unit) of inl a => a | inr b => ff",
    ),
    (
        Calculus::Moggi,
        "(\\f:Bool -> Bool. f (f tt)) (\\x:Bool. if x then ff else tt)",
    ),
    (
        Calculus::Moggi,
        "let y = (let x = ret ff in ret x) in ret y",
    ),
    (Calculus::Moggi, "\\x:Bool. (\\y:Bool. y) x"),
    (Calculus::DaviesPfenning, "let box u = box tt in box u"),
    (
        Calculus::DaviesPfenning,
        "let box u = box (tt, ff) in box (snd u, fst u)",
    ),
    (
        Calculus::DaviesPfenning,
        "(\\c:BoolCo. if c then c else tt) tt",
    ),
    (
        Calculus::DaviesPfenning,
        "(\\b:Box Bool. let box u = b in box (if u then ff else tt)) (box tt)",
    ),
    (Calculus::DaviesPfenning, "box (\\x:Bool. x)"),
    (Calculus::Dcc, "let x = ret[L] tt in ret[H] x"),
    (Calculus::Dcc, "let x = ret[H] ff in ret[H] (x, tt)"),
    (
        Calculus::Dcc,
        "(\\y:T[L] Bool. let z = y in ret[H] z) (ret[L] ff)",
    ),
    (
        Calculus::Dcc,
        "case (inr ff : Unit + Bool) of inl a => ret[L] tt | inr b => ret[L] b",
    ),
    (Calculus::Dcc, "if ff then ret[H] tt else ret[H] ff"),
    (Calculus::Sealing, "seal[H] (unseal[H] (seal[H] tt))"),
    (
        Calculus::Sealing,
        "(\\s:Seal[L] Bool. seal[H] (if unseal[L] s then ff else tt)) (seal[L] tt)",
    ),
    (Calculus::Sealing, "fst (seal[L] tt, ff)"),
    (Calculus::Sealing, "seal[H] ((\\x:Bool. x) ff)"),
    (
        Calculus::Sealing,
        "(\\p:Seal[H] (Bool * Bool). seal[H] (snd (unseal[H] p))) (seal[H] (tt, ff))",
    ),
];
