/*
 * Short Weierstrass (a = 0) point arithmetic, instantiated once per group.
 *
 * Required macros before inclusion:
 *   PFX               name prefix (g1 / g2)
 *   FE                field element type
 *   FE_ADD FE_SUB FE_MUL FE_SQR FE_INV   (out, in...) field ops, Montgomery form
 *   FE_IS_ZERO FE_EQ  predicates
 *   FE_ONE            pointer to Montgomery one
 *   FE_TO_MONT FE_FROM_MONT   (out, in) conversions
 *   FE_LIMBS          number of 64-bit limbs per coordinate
 */

#define CAT2(a, b) a##_##b
#define CAT(a, b) CAT2(a, b)
#define F(name) CAT(PFX, name)

typedef struct { FE x, y, z; } F(jac);
typedef struct { FE x, y; int inf; } F(aff);

static inline int F(is_inf)(const F(jac) *p) { return FE_IS_ZERO(&p->z); }

static inline void F(set_inf)(F(jac) *p)
{
    memset(p, 0, sizeof(*p));
}

/* dbl-2009-l */
static void F(dbl)(F(jac) *r, const F(jac) *p)
{
    if (F(is_inf)(p)) { F(set_inf)(r); return; }
    FE a, b, c, d, e, f, t;
    FE_SQR(&a, &p->x);
    FE_SQR(&b, &p->y);
    FE_SQR(&c, &b);
    FE_ADD(&t, &p->x, &b);
    FE_SQR(&t, &t);
    FE_SUB(&t, &t, &a);
    FE_SUB(&t, &t, &c);
    FE_ADD(&d, &t, &t);
    FE_ADD(&e, &a, &a);
    FE_ADD(&e, &e, &a);
    FE_SQR(&f, &e);
    FE z3;
    FE_MUL(&z3, &p->y, &p->z);
    FE_ADD(&z3, &z3, &z3);
    FE x3;
    FE_SUB(&x3, &f, &d);
    FE_SUB(&x3, &x3, &d);
    FE y3;
    FE_SUB(&t, &d, &x3);
    FE_MUL(&y3, &e, &t);
    FE_ADD(&c, &c, &c);
    FE_ADD(&c, &c, &c);
    FE_ADD(&c, &c, &c);
    FE_SUB(&y3, &y3, &c);
    r->x = x3;
    r->y = y3;
    r->z = z3;
}

/* madd-2007-bl; q must not be the point at infinity */
static void F(madd)(F(jac) *r, const F(jac) *p, const F(aff) *q)
{
    if (F(is_inf)(p)) {
        r->x = q->x;
        r->y = q->y;
        r->z = *FE_ONE;
        return;
    }
    FE z1z1, u2, s2, h, hh, i, j, rr, v, t;
    FE_SQR(&z1z1, &p->z);
    FE_MUL(&u2, &q->x, &z1z1);
    FE_MUL(&s2, &q->y, &p->z);
    FE_MUL(&s2, &s2, &z1z1);
    FE_SUB(&h, &u2, &p->x);
    FE_SUB(&rr, &s2, &p->y);
    if (FE_IS_ZERO(&h)) {
        if (FE_IS_ZERO(&rr)) { F(dbl)(r, p); }
        else { F(set_inf)(r); }
        return;
    }
    FE_ADD(&rr, &rr, &rr);
    FE_SQR(&hh, &h);
    FE_ADD(&i, &hh, &hh);
    FE_ADD(&i, &i, &i);
    FE_MUL(&j, &h, &i);
    FE_MUL(&v, &p->x, &i);
    FE x3, y3, z3;
    FE_SQR(&x3, &rr);
    FE_SUB(&x3, &x3, &j);
    FE_SUB(&x3, &x3, &v);
    FE_SUB(&x3, &x3, &v);
    FE_SUB(&t, &v, &x3);
    FE_MUL(&y3, &rr, &t);
    FE_MUL(&t, &p->y, &j);
    FE_ADD(&t, &t, &t);
    FE_SUB(&y3, &y3, &t);
    FE_ADD(&z3, &p->z, &h);
    FE_SQR(&z3, &z3);
    FE_SUB(&z3, &z3, &z1z1);
    FE_SUB(&z3, &z3, &hh);
    r->x = x3;
    r->y = y3;
    r->z = z3;
}

/* add-2007-bl */
static void F(add)(F(jac) *r, const F(jac) *p, const F(jac) *q)
{
    if (F(is_inf)(p)) { *r = *q; return; }
    if (F(is_inf)(q)) { *r = *p; return; }
    FE z1z1, z2z2, u1, u2, s1, s2, h, i, j, rr, v, t;
    FE_SQR(&z1z1, &p->z);
    FE_SQR(&z2z2, &q->z);
    FE_MUL(&u1, &p->x, &z2z2);
    FE_MUL(&u2, &q->x, &z1z1);
    FE_MUL(&s1, &p->y, &q->z);
    FE_MUL(&s1, &s1, &z2z2);
    FE_MUL(&s2, &q->y, &p->z);
    FE_MUL(&s2, &s2, &z1z1);
    FE_SUB(&h, &u2, &u1);
    FE_SUB(&rr, &s2, &s1);
    if (FE_IS_ZERO(&h)) {
        if (FE_IS_ZERO(&rr)) { F(dbl)(r, p); }
        else { F(set_inf)(r); }
        return;
    }
    FE_ADD(&rr, &rr, &rr);
    FE_ADD(&i, &h, &h);
    FE_SQR(&i, &i);
    FE_MUL(&j, &h, &i);
    FE_MUL(&v, &u1, &i);
    FE x3, y3, z3;
    FE_SQR(&x3, &rr);
    FE_SUB(&x3, &x3, &j);
    FE_SUB(&x3, &x3, &v);
    FE_SUB(&x3, &x3, &v);
    FE_SUB(&t, &v, &x3);
    FE_MUL(&y3, &rr, &t);
    FE_MUL(&t, &s1, &j);
    FE_ADD(&t, &t, &t);
    FE_SUB(&y3, &y3, &t);
    FE_ADD(&z3, &p->z, &q->z);
    FE_SQR(&z3, &z3);
    FE_SUB(&z3, &z3, &z1z1);
    FE_SUB(&z3, &z3, &z2z2);
    FE_MUL(&z3, &z3, &h);
    r->x = x3;
    r->y = y3;
    r->z = z3;
}

/* Canonical little-endian limbs -> Montgomery affine. All-zero encodes infinity. */
static void F(load)(F(aff) *out, const uint64_t *in)
{
    int zero = 1;
    for (int k = 0; k < 2 * FE_LIMBS; k++) {
        if (in[k]) { zero = 0; break; }
    }
    if (zero) {
        memset(out, 0, sizeof(*out));
        out->inf = 1;
        return;
    }
    FE tmp;
    memcpy(&tmp, in, sizeof(FE));
    FE_TO_MONT(&out->x, &tmp);
    memcpy(&tmp, in + FE_LIMBS, sizeof(FE));
    FE_TO_MONT(&out->y, &tmp);
    out->inf = 0;
}

/* Jacobian -> canonical affine limbs using one shared inversion. */
static int F(store_batch)(uint64_t *out, const F(jac) *pts, size_t n)
{
    FE *prefix = (FE *)malloc(sizeof(FE) * (n ? n : 1));
    if (!prefix) return -1;
    FE acc = *FE_ONE;
    for (size_t k = 0; k < n; k++) {
        prefix[k] = acc;
        if (!F(is_inf)(&pts[k])) FE_MUL(&acc, &acc, &pts[k].z);
    }
    FE inv;
    FE_INV(&inv, &acc);
    for (size_t k = n; k-- > 0;) {
        uint64_t *dst = out + k * 2 * FE_LIMBS;
        if (F(is_inf)(&pts[k])) {
            memset(dst, 0, sizeof(uint64_t) * 2 * FE_LIMBS);
            continue;
        }
        FE zinv, z2, z3, x, y;
        FE_MUL(&zinv, &inv, &prefix[k]);
        FE_MUL(&inv, &inv, &pts[k].z);
        FE_SQR(&z2, &zinv);
        FE_MUL(&z3, &z2, &zinv);
        FE_MUL(&x, &pts[k].x, &z2);
        FE_MUL(&y, &pts[k].y, &z3);
        FE_FROM_MONT(&x, &x);
        FE_FROM_MONT(&y, &y);
        memcpy(dst, &x, sizeof(FE));
        memcpy(dst + FE_LIMBS, &y, sizeof(FE));
    }
    free(prefix);
    return 0;
}

/* Same as store_batch but keeps Montgomery affine form (for tables). */
static int F(normalize_batch)(F(aff) *out, const F(jac) *pts, size_t n)
{
    FE *prefix = (FE *)malloc(sizeof(FE) * (n ? n : 1));
    if (!prefix) return -1;
    FE acc = *FE_ONE;
    for (size_t k = 0; k < n; k++) {
        prefix[k] = acc;
        if (!F(is_inf)(&pts[k])) FE_MUL(&acc, &acc, &pts[k].z);
    }
    FE inv;
    FE_INV(&inv, &acc);
    for (size_t k = n; k-- > 0;) {
        if (F(is_inf)(&pts[k])) {
            memset(&out[k], 0, sizeof(out[k]));
            out[k].inf = 1;
            continue;
        }
        FE zinv, z2, z3;
        FE_MUL(&zinv, &inv, &prefix[k]);
        FE_MUL(&inv, &inv, &pts[k].z);
        FE_SQR(&z2, &zinv);
        FE_MUL(&z3, &z2, &zinv);
        FE_MUL(&out[k].x, &pts[k].x, &z2);
        FE_MUL(&out[k].y, &pts[k].y, &z3);
        out[k].inf = 0;
    }
    free(prefix);
    return 0;
}

/* Bucket-method multi-scalar multiplication. */
static int F(msm)(F(jac) *result, const F(aff) *pts, const uint64_t *scalars, size_t n)
{
    F(set_inf)(result);
    if (n == 0) return 0;
    unsigned c = msm_window(n);
    size_t nb = ((size_t)1 << c) - 1;
    F(jac) *buckets = (F(jac) *)malloc(sizeof(F(jac)) * nb);
    if (!buckets) return -1;
    unsigned nwin = (SCALAR_BITS + c - 1) / c;
    for (unsigned w = nwin; w-- > 0;) {
        for (unsigned k = 0; k < c && w + 1 < nwin; k++) F(dbl)(result, result);
        memset(buckets, 0, sizeof(F(jac)) * nb);
        unsigned off = w * c;
        for (size_t k = 0; k < n; k++) {
            if (pts[k].inf) continue;
            unsigned d = scalar_digit(scalars + 4 * k, off, c);
            if (d) F(madd)(&buckets[d - 1], &buckets[d - 1], &pts[k]);
        }
        F(jac) running, total;
        F(set_inf)(&running);
        F(set_inf)(&total);
        for (size_t b = nb; b-- > 0;) {
            F(add)(&running, &running, &buckets[b]);
            F(add)(&total, &total, &running);
        }
        F(add)(result, result, &total);
    }
    free(buckets);
    return 0;
}

/* Fixed-base windowed multiplication of one base by many scalars. */
static int F(mul_batch)(F(jac) *out, const F(aff) *base, const uint64_t *scalars, size_t n, unsigned wmax)
{
    if (n == 0) return 0;
    if (base->inf) {
        for (size_t k = 0; k < n; k++) F(set_inf)(&out[k]);
        return 0;
    }
    unsigned w = msm_window(n);
    if (w > wmax) w = wmax;
    unsigned nwin = (SCALAR_BITS + w - 1) / w;
    size_t per = ((size_t)1 << w) - 1;
    F(jac) *tmp = (F(jac) *)malloc(sizeof(F(jac)) * per * nwin);
    F(aff) *table = (F(aff) *)malloc(sizeof(F(aff)) * per * nwin);
    if (!tmp || !table) { free(tmp); free(table); return -1; }
    F(aff) step = *base;
    for (unsigned j = 0; j < nwin; j++) {
        F(jac) *row = tmp + (size_t)j * per;
        F(set_inf)(&row[0]);
        F(madd)(&row[0], &row[0], &step);
        for (size_t d = 1; d < per; d++) F(madd)(&row[d], &row[d - 1], &step);
        /* next window base = 2^w * step = (per + 1) * step */
        F(jac) nxt;
        F(madd)(&nxt, &row[per - 1], &step);
        if (F(normalize_batch)(&step, &nxt, 1)) { free(tmp); free(table); return -1; }
    }
    if (F(normalize_batch)(table, tmp, per * nwin)) { free(tmp); free(table); return -1; }
    free(tmp);
    for (size_t k = 0; k < n; k++) {
        F(jac) acc;
        F(set_inf)(&acc);
        const uint64_t *s = scalars + 4 * k;
        for (unsigned j = 0; j < nwin; j++) {
            unsigned d = scalar_digit(s, j * w, w);
            if (d && !table[(size_t)j * per + d - 1].inf)
                F(madd)(&acc, &acc, &table[(size_t)j * per + d - 1]);
        }
        out[k] = acc;
    }
    free(table);
    return 0;
}

#undef F
#undef CAT
#undef CAT2
