/*
 * Native kernels for BN254: Montgomery field arithmetic, bucket MSM and
 * fixed-base batch multiplication on G1/G2, and radix-2 NTT over Fr.
 *
 * Wire format shared with the Python side:
 *   scalar      32 bytes, little-endian, canonical (< r)
 *   G1 affine   x || y, each 32 bytes little-endian canonical
 *   G2 affine   x.c0 || x.c1 || y.c0 || y.c1
 *   infinity    all-zero bytes
 */
#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>

typedef unsigned __int128 u128;
typedef struct { uint64_t l[4]; } fe;
typedef struct { fe c0, c1; } fe2;

#define SCALAR_BITS 254

static const uint64_t FQ_P[4] = {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL,
                                 0xb85045b68181585dULL, 0x30644e72e131a029ULL};
static const uint64_t FQ_INV = 0x87d20782e4866389ULL;
static const fe FQ_R2 = {{0xf32cfc5b538afa89ULL, 0xb5e71911d44501fbULL,
                          0x47ab1eff0a417ff6ULL, 0x06d89f71cab8351fULL}};
static const fe FQ_ONE = {{0xd35d438dc58f0d9dULL, 0x0a78eb28f5c70b3dULL,
                           0x666ea36f7879462cULL, 0x0e0a77c19a07df2fULL}};

static const uint64_t FR_P[4] = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                 0xb85045b68181585dULL, 0x30644e72e131a029ULL};
static const uint64_t FR_INV = 0xc2e1f593efffffffULL;
static const fe FR_R2 = {{0x1bb8e645ae216da7ULL, 0x53fe3ab1e35c59e3ULL,
                          0x8c49833d53bb8085ULL, 0x0216d0b17f4e44a5ULL}};
static const fe FR_ONE = {{0xac96341c4ffffffbULL, 0x36fc76959f60cd29ULL,
                           0x666ea36f7879462eULL, 0x0e0a77c19a07df2fULL}};

/* ---- generic 4-limb modular arithmetic (modulus < 2^254) ---- */

static inline void mont_mul(fe *res, const fe *a, const fe *b, const uint64_t *p, uint64_t inv)
{
    /* CIOS without the extra carry word: valid because p[3] < 2^63 - 1 */
    uint64_t t[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; i++) {
        uint64_t bi = b->l[i];
        u128 s = (u128)a->l[0] * bi + t[0];
        uint64_t A = (uint64_t)(s >> 64);
        uint64_t lo = (uint64_t)s;
        uint64_t m = lo * inv;
        uint64_t C = (uint64_t)(((u128)m * p[0] + lo) >> 64);
        for (int j = 1; j < 4; j++) {
            s = (u128)a->l[j] * bi + t[j] + A;
            A = (uint64_t)(s >> 64);
            s = (u128)m * p[j] + (uint64_t)s + C;
            C = (uint64_t)(s >> 64);
            t[j - 1] = (uint64_t)s;
        }
        t[3] = C + A;
    }
    /* result < 2p */
    uint64_t d[4], borrow = 0;
    u128 s;
    for (int j = 0; j < 4; j++) {
        s = (u128)t[j] - p[j] - borrow;
        d[j] = (uint64_t)s;
        borrow = (uint64_t)(s >> 64) & 1;
    }
    if (borrow) memcpy(res->l, t, sizeof(t));
    else memcpy(res->l, d, sizeof(d));
}

static inline void mod_add(fe *r, const fe *a, const fe *b, const uint64_t *p)
{
    uint64_t t[4], d[4];
    u128 s;
    uint64_t c = 0;
    for (int j = 0; j < 4; j++) {
        s = (u128)a->l[j] + b->l[j] + c;
        t[j] = (uint64_t)s;
        c = (uint64_t)(s >> 64);
    }
    uint64_t borrow = 0;
    for (int j = 0; j < 4; j++) {
        s = (u128)t[j] - p[j] - borrow;
        d[j] = (uint64_t)s;
        borrow = (uint64_t)(s >> 64) & 1;
    }
    uint64_t keep = (uint64_t)0 - borrow; /* all ones when t < p */
    for (int j = 0; j < 4; j++) r->l[j] = (t[j] & keep) | (d[j] & ~keep);
}

static inline void mod_sub(fe *r, const fe *a, const fe *b, const uint64_t *p)
{
    uint64_t t[4];
    u128 s;
    uint64_t borrow = 0;
    for (int j = 0; j < 4; j++) {
        s = (u128)a->l[j] - b->l[j] - borrow;
        t[j] = (uint64_t)s;
        borrow = (uint64_t)(s >> 64) & 1;
    }
    uint64_t mask = (uint64_t)0 - borrow;
    uint64_t c = 0;
    for (int j = 0; j < 4; j++) {
        s = (u128)t[j] + (p[j] & mask) + c;
        r->l[j] = (uint64_t)s;
        c = (uint64_t)(s >> 64);
    }
}

static inline int fe_is_zero(const fe *a)
{
    return (a->l[0] | a->l[1] | a->l[2] | a->l[3]) == 0;
}

/* a^(p-2) by square-and-multiply over the exponent bits */
static void mont_inv(fe *r, const fe *a, const uint64_t *p, uint64_t inv, const fe *one)
{
    uint64_t e[4];
    memcpy(e, p, sizeof(e));
    e[0] -= 2; /* p is odd and > 2, no borrow */
    fe acc = *one;
    fe base = *a;
    for (int i = 0; i < 4; i++) {
        uint64_t w = e[i];
        for (int b = 0; b < 64; b++) {
            if (w & 1) mont_mul(&acc, &acc, &base, p, inv);
            mont_mul(&base, &base, &base, p, inv);
            w >>= 1;
        }
    }
    *r = acc;
}

/* ---- Fq ---- */
static inline void fq_mul(fe *r, const fe *a, const fe *b) { mont_mul(r, a, b, FQ_P, FQ_INV); }
static inline void fq_sqr(fe *r, const fe *a) { mont_mul(r, a, a, FQ_P, FQ_INV); }
static inline void fq_add(fe *r, const fe *a, const fe *b) { mod_add(r, a, b, FQ_P); }
static inline void fq_sub(fe *r, const fe *a, const fe *b) { mod_sub(r, a, b, FQ_P); }
static inline void fq_inv(fe *r, const fe *a) { mont_inv(r, a, FQ_P, FQ_INV, &FQ_ONE); }
static inline int fq_eq(const fe *a, const fe *b) { return memcmp(a, b, sizeof(fe)) == 0; }
static inline void fq_to_mont(fe *r, const fe *a) { fq_mul(r, a, &FQ_R2); }
static inline void fq_from_mont(fe *r, const fe *a)
{
    static const fe one = {{1, 0, 0, 0}};
    fq_mul(r, a, &one);
}

/* ---- Fq2 = Fq[u]/(u^2 + 1) ---- */
static const fe2 FQ2_ONE = {{{0xd35d438dc58f0d9dULL, 0x0a78eb28f5c70b3dULL,
                              0x666ea36f7879462cULL, 0x0e0a77c19a07df2fULL}},
                            {{0, 0, 0, 0}}};

static inline void fq2_add(fe2 *r, const fe2 *a, const fe2 *b)
{
    fq_add(&r->c0, &a->c0, &b->c0);
    fq_add(&r->c1, &a->c1, &b->c1);
}

static inline void fq2_sub(fe2 *r, const fe2 *a, const fe2 *b)
{
    fq_sub(&r->c0, &a->c0, &b->c0);
    fq_sub(&r->c1, &a->c1, &b->c1);
}

static inline void fq2_mul(fe2 *r, const fe2 *a, const fe2 *b)
{
    fe v0, v1, s0, s1, t;
    fq_mul(&v0, &a->c0, &b->c0);
    fq_mul(&v1, &a->c1, &b->c1);
    fq_add(&s0, &a->c0, &a->c1);
    fq_add(&s1, &b->c0, &b->c1);
    fq_mul(&t, &s0, &s1);
    fq_sub(&t, &t, &v0);
    fq_sub(&r->c1, &t, &v1);
    fq_sub(&r->c0, &v0, &v1);
}

static inline void fq2_sqr(fe2 *r, const fe2 *a)
{
    fe s, d, m;
    fq_add(&s, &a->c0, &a->c1);
    fq_sub(&d, &a->c0, &a->c1);
    fq_mul(&m, &a->c0, &a->c1);
    fq_mul(&r->c0, &s, &d);
    fq_add(&r->c1, &m, &m);
}

static inline void fq2_inv(fe2 *r, const fe2 *a)
{
    fe t0, t1, n;
    fq_sqr(&t0, &a->c0);
    fq_sqr(&t1, &a->c1);
    fq_add(&n, &t0, &t1);
    fq_inv(&n, &n);
    fe zero = {{0, 0, 0, 0}};
    fq_mul(&r->c0, &a->c0, &n);
    fq_mul(&t1, &a->c1, &n);
    fq_sub(&r->c1, &zero, &t1);
}

static inline int fq2_is_zero(const fe2 *a) { return fe_is_zero(&a->c0) && fe_is_zero(&a->c1); }
static inline int fq2_eq(const fe2 *a, const fe2 *b) { return memcmp(a, b, sizeof(fe2)) == 0; }
static inline void fq2_to_mont(fe2 *r, const fe2 *a)
{
    fq_to_mont(&r->c0, &a->c0);
    fq_to_mont(&r->c1, &a->c1);
}
static inline void fq2_from_mont(fe2 *r, const fe2 *a)
{
    fq_from_mont(&r->c0, &a->c0);
    fq_from_mont(&r->c1, &a->c1);
}

/* ---- Fr ---- */
static inline void fr_mul(fe *r, const fe *a, const fe *b) { mont_mul(r, a, b, FR_P, FR_INV); }
static inline void fr_add(fe *r, const fe *a, const fe *b) { mod_add(r, a, b, FR_P); }
static inline void fr_sub(fe *r, const fe *a, const fe *b) { mod_sub(r, a, b, FR_P); }
static inline void fr_to_mont(fe *r, const fe *a) { fr_mul(r, a, &FR_R2); }
static inline void fr_from_mont(fe *r, const fe *a)
{
    static const fe one = {{1, 0, 0, 0}};
    fr_mul(r, a, &one);
}

/* ---- scalar helpers ---- */

static unsigned msm_window(size_t n)
{
    unsigned bits = 0;
    while (((size_t)1 << bits) <= n) bits++;
    int c = (int)bits - 4;
    if (c < 2) c = 2;
    if (c > 16) c = 16;
    return (unsigned)c;
}

static inline unsigned scalar_digit(const uint64_t *s, unsigned off, unsigned c)
{
    unsigned limb = off >> 6, sh = off & 63;
    if (limb >= 4) return 0;
    uint64_t v = s[limb] >> sh;
    if (sh + c > 64 && limb + 1 < 4) v |= s[limb + 1] << (64 - sh);
    return (unsigned)(v & (((uint64_t)1 << c) - 1));
}

/* ---- group instantiations ---- */

#define PFX g1
#define FE fe
#define FE_ADD fq_add
#define FE_SUB fq_sub
#define FE_MUL fq_mul
#define FE_SQR fq_sqr
#define FE_INV fq_inv
#define FE_IS_ZERO fe_is_zero
#define FE_ONE (&FQ_ONE)
#define FE_TO_MONT fq_to_mont
#define FE_FROM_MONT fq_from_mont
#define FE_LIMBS 4
#include "_curve_impl.h"
#undef PFX
#undef FE
#undef FE_ADD
#undef FE_SUB
#undef FE_MUL
#undef FE_SQR
#undef FE_INV
#undef FE_IS_ZERO
#undef FE_ONE
#undef FE_TO_MONT
#undef FE_FROM_MONT
#undef FE_LIMBS

#define PFX g2
#define FE fe2
#define FE_ADD fq2_add
#define FE_SUB fq2_sub
#define FE_MUL fq2_mul
#define FE_SQR fq2_sqr
#define FE_INV fq2_inv
#define FE_IS_ZERO fq2_is_zero
#define FE_ONE (&FQ2_ONE)
#define FE_TO_MONT fq2_to_mont
#define FE_FROM_MONT fq2_from_mont
#define FE_LIMBS 8
#include "_curve_impl.h"

/* ---- Python bindings ---- */

#define G1_BYTES 64
#define G2_BYTES 128

static int check_len(Py_ssize_t len, Py_ssize_t unit, const char *what)
{
    if (len % unit != 0) {
        PyErr_Format(PyExc_ValueError, "%s buffer length %zd is not a multiple of %zd", what, len, unit);
        return -1;
    }
    return 0;
}

#define DEFINE_MSM(NAME, PFXN, BYTES)                                                          \
    static PyObject *py_##NAME(PyObject *self, PyObject *args)                                 \
    {                                                                                          \
        Py_buffer pts, sc;                                                                     \
        if (!PyArg_ParseTuple(args, "y*y*", &pts, &sc)) return NULL;                           \
        PyObject *ret = NULL;                                                                  \
        PFXN##_aff *aff = NULL;                                                                \
        if (check_len(pts.len, BYTES, "points") || check_len(sc.len, 32, "scalars")) goto done; \
        size_t n = (size_t)(pts.len / BYTES);                                                  \
        if ((size_t)(sc.len / 32) != n) {                                                      \
            PyErr_SetString(PyExc_ValueError, "points and scalars differ in length");          \
            goto done;                                                                         \
        }                                                                                      \
        aff = (PFXN##_aff *)malloc(sizeof(PFXN##_aff) * (n ? n : 1));                          \
        uint64_t *scal = (uint64_t *)malloc(sc.len ? (size_t)sc.len : 1);                      \
        if (!aff || !scal) { free(scal); PyErr_NoMemory(); goto done; }                        \
        memcpy(scal, sc.buf, (size_t)sc.len);                                                  \
        PFXN##_jac res;                                                                        \
        int rc;                                                                                \
        Py_BEGIN_ALLOW_THREADS                                                                 \
        for (size_t k = 0; k < n; k++)                                                         \
            PFXN##_load(&aff[k], (const uint64_t *)((const char *)pts.buf + k * BYTES));       \
        rc = PFXN##_msm(&res, aff, scal, n);                                                   \
        Py_END_ALLOW_THREADS                                                                   \
        free(scal);                                                                            \
        if (rc) { PyErr_NoMemory(); goto done; }                                               \
        ret = PyBytes_FromStringAndSize(NULL, BYTES);                                          \
        if (!ret) goto done;                                                                   \
        if (PFXN##_store_batch((uint64_t *)PyBytes_AS_STRING(ret), &res, 1)) {                 \
            Py_CLEAR(ret);                                                                     \
            PyErr_NoMemory();                                                                  \
        }                                                                                      \
    done:                                                                                      \
        free(aff);                                                                             \
        PyBuffer_Release(&pts);                                                                \
        PyBuffer_Release(&sc);                                                                 \
        return ret;                                                                            \
    }

DEFINE_MSM(g1_msm, g1, G1_BYTES)
DEFINE_MSM(g2_msm, g2, G2_BYTES)

#define DEFINE_MUL_BATCH(NAME, PFXN, BYTES, WMAX)                                              \
    static PyObject *py_##NAME(PyObject *self, PyObject *args)                                 \
    {                                                                                          \
        Py_buffer base, sc;                                                                    \
        if (!PyArg_ParseTuple(args, "y*y*", &base, &sc)) return NULL;                          \
        PyObject *ret = NULL;                                                                  \
        PFXN##_jac *out = NULL;                                                                \
        uint64_t *scal = NULL;                                                                 \
        if (base.len != BYTES) {                                                               \
            PyErr_SetString(PyExc_ValueError, "base point has wrong length");                  \
            goto done;                                                                         \
        }                                                                                      \
        if (check_len(sc.len, 32, "scalars")) goto done;                                       \
        size_t n = (size_t)(sc.len / 32);                                                      \
        out = (PFXN##_jac *)malloc(sizeof(PFXN##_jac) * (n ? n : 1));                          \
        scal = (uint64_t *)malloc(sc.len ? (size_t)sc.len : 1);                                \
        if (!out || !scal) { PyErr_NoMemory(); goto done; }                                    \
        memcpy(scal, sc.buf, (size_t)sc.len);                                                  \
        PFXN##_aff b;                                                                          \
        PFXN##_load(&b, (const uint64_t *)base.buf);                                           \
        ret = PyBytes_FromStringAndSize(NULL, (Py_ssize_t)(n * BYTES));                        \
        if (!ret) goto done;                                                                   \
        int rc;                                                                                \
        uint64_t *dst = (uint64_t *)PyBytes_AS_STRING(ret);                                    \
        Py_BEGIN_ALLOW_THREADS                                                                 \
        rc = PFXN##_mul_batch(out, &b, scal, n, WMAX);                                         \
        if (!rc) rc = PFXN##_store_batch(dst, out, n);                                         \
        Py_END_ALLOW_THREADS                                                                   \
        if (rc) { Py_CLEAR(ret); PyErr_NoMemory(); }                                           \
    done:                                                                                      \
        free(out);                                                                             \
        free(scal);                                                                            \
        PyBuffer_Release(&base);                                                               \
        PyBuffer_Release(&sc);                                                                 \
        return ret;                                                                            \
    }

DEFINE_MUL_BATCH(g1_mul_batch, g1, G1_BYTES, 16)
DEFINE_MUL_BATCH(g2_mul_batch, g2, G2_BYTES, 14)

/* In-place iterative radix-2 NTT on Montgomery values. */
static int ntt(fe *a, size_t n, const fe *omega)
{
    for (size_t i = 1, j = 0; i < n; i++) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) { fe t = a[i]; a[i] = a[j]; a[j] = t; }
    }
    size_t half = n / 2;
    fe *tw = (fe *)malloc(sizeof(fe) * (half ? half : 1));
    if (!tw) return -1;
    if (half) {
        tw[0] = FR_ONE;
        for (size_t k = 1; k < half; k++) fr_mul(&tw[k], &tw[k - 1], omega);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        size_t h = len / 2, step = n / len;
        for (size_t i = 0; i < n; i += len) {
            for (size_t j = 0; j < h; j++) {
                fe u = a[i + j], v;
                fr_mul(&v, &a[i + j + h], &tw[j * step]);
                fr_add(&a[i + j], &u, &v);
                fr_sub(&a[i + j + h], &u, &v);
            }
        }
    }
    free(tw);
    return 0;
}

static PyObject *py_fr_fft(PyObject *self, PyObject *args)
{
    Py_buffer vals, om;
    if (!PyArg_ParseTuple(args, "y*y*", &vals, &om)) return NULL;
    PyObject *ret = NULL;
    fe *a = NULL;
    if (check_len(vals.len, 32, "values")) goto done;
    if (om.len != 32) {
        PyErr_SetString(PyExc_ValueError, "root of unity must be 32 bytes");
        goto done;
    }
    size_t n = (size_t)(vals.len / 32);
    if (n == 0 || (n & (n - 1))) {
        PyErr_SetString(PyExc_ValueError, "length must be a power of two");
        goto done;
    }
    a = (fe *)malloc(sizeof(fe) * n);
    if (!a) { PyErr_NoMemory(); goto done; }
    memcpy(a, vals.buf, (size_t)vals.len);
    fe omega;
    memcpy(&omega, om.buf, 32);
    int rc;
    Py_BEGIN_ALLOW_THREADS
    fr_to_mont(&omega, &omega);
    for (size_t k = 0; k < n; k++) fr_to_mont(&a[k], &a[k]);
    rc = ntt(a, n, &omega);
    if (!rc)
        for (size_t k = 0; k < n; k++) fr_from_mont(&a[k], &a[k]);
    Py_END_ALLOW_THREADS
    if (rc) { PyErr_NoMemory(); goto done; }
    ret = PyBytes_FromStringAndSize((const char *)a, (Py_ssize_t)(n * 32));
done:
    free(a);
    PyBuffer_Release(&vals);
    PyBuffer_Release(&om);
    return ret;
}

/* values[i] * start * ratio^i */
static PyObject *py_fr_scale_powers(PyObject *self, PyObject *args)
{
    Py_buffer vals, st, ra;
    if (!PyArg_ParseTuple(args, "y*y*y*", &vals, &st, &ra)) return NULL;
    PyObject *ret = NULL;
    if (check_len(vals.len, 32, "values")) goto done;
    if (st.len != 32 || ra.len != 32) {
        PyErr_SetString(PyExc_ValueError, "start and ratio must be 32 bytes");
        goto done;
    }
    size_t n = (size_t)(vals.len / 32);
    ret = PyBytes_FromStringAndSize(NULL, vals.len);
    if (!ret) goto done;
    fe *out = (fe *)PyBytes_AS_STRING(ret);
    memcpy(out, vals.buf, (size_t)vals.len);
    fe cur, ratio;
    memcpy(&cur, st.buf, 32);
    memcpy(&ratio, ra.buf, 32);
    Py_BEGIN_ALLOW_THREADS
    fr_to_mont(&cur, &cur);
    fr_to_mont(&ratio, &ratio);
    for (size_t k = 0; k < n; k++) {
        fe v;
        fr_to_mont(&v, &out[k]);
        fr_mul(&v, &v, &cur);
        fr_from_mont(&out[k], &v);
        fr_mul(&cur, &cur, &ratio);
    }
    Py_END_ALLOW_THREADS
done:
    PyBuffer_Release(&vals);
    PyBuffer_Release(&st);
    PyBuffer_Release(&ra);
    return ret;
}

static PyMethodDef methods[] = {
    {"g1_msm", py_g1_msm, METH_VARARGS, "Multi-scalar multiplication over G1."},
    {"g2_msm", py_g2_msm, METH_VARARGS, "Multi-scalar multiplication over G2."},
    {"g1_mul_batch", py_g1_mul_batch, METH_VARARGS, "Multiply one G1 base by many scalars."},
    {"g2_mul_batch", py_g2_mul_batch, METH_VARARGS, "Multiply one G2 base by many scalars."},
    {"fr_fft", py_fr_fft, METH_VARARGS, "Radix-2 NTT over Fr with the given root of unity."},
    {"fr_scale_powers", py_fr_scale_powers, METH_VARARGS, "Multiply values[i] by start*ratio^i."},
    {NULL, NULL, 0, NULL},
};

static struct PyModuleDef moduledef = {PyModuleDef_HEAD_INIT, "_bn254", NULL, -1, methods};

PyMODINIT_FUNC PyInit__bn254(void) { return PyModule_Create(&moduledef); }
