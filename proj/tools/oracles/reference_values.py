#!/usr/bin/env python3
"""Independent reference oracle for the regret-dissect test suite.

Computes, with scipy/mpmath (implementations unrelated to the C++ code under
test), every numerical constant that the C++ tests freeze and assert against:
closed-form special values, the two canonical newsvendor instances
(well-specified and misspecified), a smooth portfolio instance, chi-square
mixture spot values, and the tail-bound compositions.

Run:  python3 tools/oracles/reference_values.py
The output is a flat `name = value` listing (17 significant digits) plus a
JSON dump next to this script (reference_values.json).
"""

import json
import math
import os

import numpy as np
from scipy import optimize, stats
from scipy.integrate import quad

OUT = {}


def emit(name, value):
    OUT[name] = float(value)
    print(f"{name} = {value:.17g}")


# ----------------------------------------------------------------------------
# Plain special values
# ----------------------------------------------------------------------------
phi = stats.norm.pdf
Phi = stats.norm.cdf
Phi_inv = stats.norm.ppf

emit("phi_inv_075", Phi_inv(0.75))                      # newsvendor offset, b/(b+h)=0.75
emit("phi_inv_0975", Phi_inv(0.975))
emit("phi_inv_1e10", Phi_inv(1e-10))
emit("Phi_1", Phi(1.0))
emit("tv_gauss_theta0_2", 2 * Phi(1.0) - 1)             # d_TV(N(0,1), N(2,1))
emit("log_density_std_at_0", -0.5 * math.log(2 * math.pi))
emit("abs_moment_std_normal", math.sqrt(2 / math.pi))   # E|z|, z ~ N(0,1)
emit("chi2_1_q95", stats.chi2.ppf(0.95, df=1))
emit("chi2_1_cdf_1", stats.chi2.cdf(1.0, df=1))
emit("exp1_tail_at_1", math.exp(-1.0))                  # 0.5*chi2(2) == Exp(1)
emit("portfolio_v0_omega1", math.exp(0.5) + 0.5)        # gamma=0.5, P=N(0,1), omega=1

# E|1-z| - E|z| for z ~ N(0,1): regret of omega=1 in the symmetric newsvendor
emit("regret_ws_omega1", (2 * phi(1.0) + (2 * Phi(1.0) - 1)) - math.sqrt(2 / math.pi))

# Portfolio oracle example: gamma=0.5, P_theta=N(1,1); stationarity
# (omega-1)e^{-omega+omega^2/2} + omega = 0
root = optimize.brentq(lambda w: (w - 1) * math.exp(-w + w * w / 2) + w, 0.0, 1.0,
                       xtol=1e-15, rtol=8.9e-16)
emit("portfolio_oracle_theta1_gamma05", root)

# Generalization-bound all-ones fixture: q=1, n=100, confidence delta-tilde = 2/e
emit("genbound_all_ones", 4 * math.sqrt(2) * 0.1 + 2 * math.sqrt(1.0 / 200.0))

# lower-bound concentration constant spot value: 1 - exp(-n*gap^2/(2 s^2)), n=100, gap=0.1, s=1
emit("lower_bound_spot", 1 - math.exp(-100 * 0.01 / 2))


# ----------------------------------------------------------------------------
# Newsvendor analytics under gaussian mixtures
# ----------------------------------------------------------------------------
def nv_v0(omega, h, b, comps):
    """E[h(omega-z)^+ + b(z-omega)^+] for z ~ sum_j w_j N(mu_j, s_j^2)."""
    total = 0.0
    for (w, mu, s) in comps:
        a = (omega - mu) / s
        e_over = (omega - mu) * Phi(a) + s * phi(a)      # E(omega - z)^+
        e_under = e_over - (omega - mu)                   # E(z - omega)^+
        total += w * (h * e_over + b * e_under)
    return total


def mix_cdf(x, comps):
    return sum(w * Phi((x - mu) / s) for (w, mu, s) in comps)


def mix_pdf(x, comps):
    return sum(w * phi((x - mu) / s) / s for (w, mu, s) in comps)


def mix_quantile(p, comps, lo=-60.0, hi=60.0):
    return optimize.brentq(lambda x: mix_cdf(x, comps) - p, lo, hi,
                           xtol=1e-14, rtol=8.9e-16)


# ----------------------------------------------------------------------------
# Canonical well-specified instance: P = N(0,1), sigma = 1, h = b = 1
# ----------------------------------------------------------------------------
H_ws = 2 * phi(0.0)                 # d^2/dtheta^2 E|theta - z| at 0
emit("ws_hess_v0", H_ws)
emit("ws_m1_eto", 1.0)
emit("ws_m1_ieo", 1.0 / H_ws)       # Var(sign) = 1, sandwich = H^{-1}
emit("ws_lambda_eto", 0.5 * H_ws)
emit("ws_lambda_ieo", 0.5 / H_ws)
emit("ws_tau1", 1.0 / H_ws - H_ws)  # = tau2 = tau3 in 1-d
emit("ws_tau6", H_ws)
emit("ws_tau_ratio", (1.0 / H_ws - H_ws) / H_ws)        # = pi/2 - 1 exactly
# delta=0 upper-bound window probabilities, G_IEO = lambda_ieo * chi2(1), window [t, (pi/2) t]
lam_ieo_ws = 0.5 / H_ws
for tt in (1, 2, 4):
    p = stats.chi2.cdf((math.pi / 2) * tt / lam_ieo_ws, df=1) - stats.chi2.cdf(tt / lam_ieo_ws, df=1)
    emit(f"ws_window_prob_t{tt}", p)

# E|z| under N(0,1) via generic quadrature cross-check
val, err = quad(lambda z: abs(z) * phi(z), -40, 40, limit=400)
emit("ws_abs_moment_quad_err", abs(val - math.sqrt(2 / math.pi)))


# ----------------------------------------------------------------------------
# Canonical misspecified instance:
#   P = 0.5 N(-2,1) + 0.5 N(2,1), gaussian-location sigma=1, newsvendor h=1, b=3
# ----------------------------------------------------------------------------
comps_mis = [(0.5, -2.0, 1.0), (0.5, 2.0, 1.0)]
h_mis, b_mis = 1.0, 3.0
tau_q = b_mis / (b_mis + h_mis)                          # 0.75
c0 = Phi_inv(tau_q)                                      # oracle offset

omega_star = mix_quantile(tau_q, comps_mis)
emit("mis_omega_star", omega_star)
emit("mis_theta_star", omega_star - c0)

v0_star = nv_v0(omega_star, h_mis, b_mis, comps_mis)
emit("mis_v0_star", v0_star)

theta_kl = 0.0                                           # mixture mean
omega_kl = theta_kl + c0
v0_at_kl = nv_v0(omega_kl, h_mis, b_mis, comps_mis)
emit("mis_v0_at_omega_kl", v0_at_kl)
kappa_eto = v0_at_kl - v0_star
emit("mis_kappa0_eto", kappa_eto)                        # = delta; kappa0_ieo = 0

# First derivative of v0 at omega_kl: (h+b) F(omega) - b
grad_v0_kl = (h_mis + b_mis) * mix_cdf(omega_kl, comps_mis) - b_mis
emit("mis_grad_v0_at_kl", grad_v0_kl)

# ETO sandwich: H_log = -1 (sigma=1), Var_P(score) = Var_P(z) = 1 + 4 = 5
var_p_z = 5.0
m1_eto_mis = math.sqrt(var_p_z)
emit("mis_m1_eto", m1_eto_mis)
s_mis = abs(grad_v0_kl) * m1_eto_mis                     # ||grad v0 . M1_eto||
emit("mis_grad_m1_norm", s_mis)

# IEO sandwich at theta*: H* = (h+b) f_P(omega*), Var_P(grad_theta c) at omega*
f_star = mix_pdf(omega_star, comps_mis)
Hstar = (h_mis + b_mis) * f_star
emit("mis_hess_v0_star", Hstar)
F_at_star = mix_cdf(omega_star, comps_mis)               # = 0.75 by construction
mean_g = h_mis * F_at_star - b_mis * (1 - F_at_star)
second_g = h_mis ** 2 * F_at_star + b_mis ** 2 * (1 - F_at_star)
var_g_star = second_g - mean_g ** 2
emit("mis_var_grad_c_star", var_g_star)
m1_ieo_mis = math.sqrt(var_g_star) / Hstar
emit("mis_m1_ieo", m1_ieo_mis)
emit("mis_lambda_ieo", 0.5 * m1_ieo_mis ** 2 * Hstar)

# Hessian of v0 along the location sweep at theta_kl
f_kl = mix_pdf(omega_kl, comps_mis)
H_kl_mis = (h_mis + b_mis) * f_kl
emit("mis_hess_v0_kl", H_kl_mis)
emit("mis_lambda_eto", 0.5 * var_p_z * H_kl_mis)

# tau spectrum (1-d): tau1 = tau2 = M_ieo^2 H* - M_eto^2 H_kl ; tau6 = M_eto^2 H_kl
tau1_mis = m1_ieo_mis ** 2 * Hstar - var_p_z * H_kl_mis
emit("mis_tau1", tau1_mis)
emit("mis_tau6", var_p_z * H_kl_mis)

# tilde sandwiches under P_KL = N(0,1): Phi(c0) = 0.75 exactly
H_tilde_v = (h_mis + b_mis) * phi(c0)
var_g_tilde = (h_mis ** 2 * tau_q + b_mis ** 2 * (1 - tau_q)) - (h_mis * tau_q - b_mis * (1 - tau_q)) ** 2
emit("mis_hess_v_pkl", H_tilde_v)
emit("mis_var_grad_c_tilde", var_g_tilde)
m1_ieo_tilde = math.sqrt(var_g_tilde) / H_tilde_v
emit("mis_m1_ieo_tilde", m1_ieo_tilde)
emit("mis_m1_eto_tilde", 1.0)
# tau3 as printed (both Hessians at theta*, true law curvature)
emit("mis_tau3", Hstar * (m1_ieo_tilde ** 2 - 1.0))
emit("mis_tau3_pkl_variant", H_tilde_v * (m1_ieo_tilde ** 2 - 1.0))

# B0: max of the five operator-norm gaps
gap1 = 0.0                                               # both log-lik Hessians = -1
gap2 = abs(var_p_z - 1.0)                                # score variances
gap3 = abs(Hstar - H_tilde_v)
gap4 = abs(var_g_star - var_g_tilde)
gap5 = abs(Hstar - H_kl_mis)
emit("mis_b0_gap3", gap3)
emit("mis_b0_gap5", gap5)
emit("mis_b0", max(gap1, gap2, gap3, gap4, gap5))

# lower-bound constant at the acceptance point: n=4000, t = kappa_eto/2
t_mid = kappa_eto / 2
C_accept = 1 - math.exp(-4000 * (kappa_eto - t_mid) ** 2 / (2 * s_mis ** 2))
emit("mis_thm6_C_n4000_mid", C_accept)


# ----------------------------------------------------------------------------
# Portfolio instances (gamma = 0.5), gaussian-location family sigma = 1
# ----------------------------------------------------------------------------
gamma = 0.5


def pf_v(omega, mu, s2, gamma_):
    """E[exp(-z w)] + gamma w^2 for z ~ N(mu, s2)."""
    return math.exp(-mu * omega + 0.5 * s2 * omega * omega) + gamma_ * omega * omega


def pf_oracle(theta, gamma_, s2=1.0):
    g = lambda w: (-theta + s2 * w) * math.exp(-theta * w + 0.5 * s2 * w * w) + 2 * gamma_ * w
    lo, hi = -10.0, 10.0
    return optimize.brentq(g, lo, hi, xtol=1e-14, rtol=8.9e-16)


def pf_v0_mix(omega, comps, gamma_):
    return sum(w * math.exp(-mu * omega + 0.5 * s * s * omega * omega) for (w, mu, s) in comps) + gamma_ * omega ** 2


# Well-specified portfolio fixture: P = N(0.5, 1)
theta0_pf = 0.5
omega_pf = pf_oracle(theta0_pf, gamma)
emit("pf_ws_omega_star", omega_pf)
emit("pf_ws_v0_star", pf_v(omega_pf, theta0_pf, 1.0, gamma))


def pf_ws_v0_of_theta(theta):
    return pf_v(pf_oracle(theta, gamma), theta0_pf, 1.0, gamma)


hh = 1e-4
H_pf = (pf_ws_v0_of_theta(theta0_pf + hh) - 2 * pf_ws_v0_of_theta(theta0_pf) + pf_ws_v0_of_theta(theta0_pf - hh)) / hh ** 2
emit("pf_ws_hess_v0", H_pf)

# ETO sandwich: Fisher = 1 => m1_eto = 1. IEO: Var(grad_theta c) via J and MGF moments.
w_ = omega_pf


def pf_grad_c_theta(z, theta):
    # d/dtheta c(omega_theta, z) = J * dc/domega, J = domega/dtheta by implicit fn
    eps = 1e-6
    J = (pf_oracle(theta + eps, gamma) - pf_oracle(theta - eps, gamma)) / (2 * eps)
    dcdw = -z * math.exp(-z * w_) + 2 * gamma * w_
    return J * dcdw


mean_gc, _ = quad(lambda z: pf_grad_c_theta(z, theta0_pf) * phi(z - theta0_pf), -12 + theta0_pf, 12 + theta0_pf, limit=200)
m2_gc, _ = quad(lambda z: pf_grad_c_theta(z, theta0_pf) ** 2 * phi(z - theta0_pf), -12 + theta0_pf, 12 + theta0_pf, limit=200)
var_gc_pf = m2_gc - mean_gc ** 2
emit("pf_ws_var_grad_c", var_gc_pf)
emit("pf_ws_m1_ieo", math.sqrt(var_gc_pf) / H_pf)
emit("pf_ws_lambda_eto", 0.5 * H_pf)
emit("pf_ws_lambda_ieo", 0.5 * var_gc_pf / H_pf)

# Misspecified portfolio fixture: P = 0.6 N(0.5,1) + 0.4 N(-1,1)
comps_pf = [(0.6, 0.5, 1.0), (0.4, -1.0, 1.0)]
theta_kl_pf = 0.6 * 0.5 + 0.4 * (-1.0)
emit("pf_mis_theta_kl", theta_kl_pf)

res = optimize.minimize_scalar(lambda th: pf_v0_mix(pf_oracle(th, gamma), comps_pf, gamma),
                               bounds=(-5, 5), method="bounded",
                               options={"xatol": 1e-12})
theta_star_pf = res.x
emit("pf_mis_theta_star", theta_star_pf)

res_w = optimize.minimize_scalar(lambda w: pf_v0_mix(w, comps_pf, gamma),
                                 bounds=(-5, 5), method="bounded",
                                 options={"xatol": 1e-12})
omega_star_pf = res_w.x
emit("pf_mis_omega_star", omega_star_pf)
v0s_pf = pf_v0_mix(omega_star_pf, comps_pf, gamma)
k_eto_pf = pf_v0_mix(pf_oracle(theta_kl_pf, gamma), comps_pf, gamma) - v0s_pf
k_ieo_pf = pf_v0_mix(pf_oracle(theta_star_pf, gamma), comps_pf, gamma) - v0s_pf
emit("pf_mis_kappa0_eto", k_eto_pf)
emit("pf_mis_kappa0_ieo", k_ieo_pf)


# ----------------------------------------------------------------------------
# Chi-square mixture spot values for a 2-d quadratic-form fixture
#   M = [[1, 0.3], [0.3, 2]], H = [[1.5, -0.2], [-0.2, 0.8]]
#   weights = eigenvalues of 0.5 * M H M
# ----------------------------------------------------------------------------
M2 = np.array([[1.0, 0.3], [0.3, 2.0]])
H2 = np.array([[1.5, -0.2], [-0.2, 0.8]])
lam2 = np.linalg.eigvalsh(0.5 * (M2 @ H2 @ M2))
lam2_sorted = sorted(lam2, reverse=True)
emit("qf2_lambda_hi", lam2_sorted[0])
emit("qf2_lambda_lo", lam2_sorted[1])


# ----------------------------------------------------------------------------
# Randomized mixture instances for the ordering check (deterministic params)
# ----------------------------------------------------------------------------
rng = np.random.default_rng(715)
instances = []
for k in range(5):
    ncomp = int(rng.integers(2, 4))
    w = rng.uniform(0.2, 1.0, size=ncomp)
    w = w / w.sum()
    mus = rng.uniform(-3.0, 3.0, size=ncomp)
    hh_ = float(rng.uniform(0.5, 3.0))
    bb_ = float(rng.uniform(0.5, 3.0))
    comps = [(float(wi), float(mi), 1.0) for wi, mi in zip(w, mus)]
    # sanity: compute kappa_eto >= kappa_ieo = 0 for location family
    tq = bb_ / (bb_ + hh_)
    ws = mix_quantile(tq, comps)
    v0s = nv_v0(ws, hh_, bb_, comps)
    mean_mix = sum(wi * mi for wi, mi, _ in comps)
    wkl = mean_mix + Phi_inv(tq)
    keto = nv_v0(wkl, hh_, bb_, comps) - v0s
    assert keto >= -1e-12, keto
    instances.append({"weights": [c[0] for c in comps],
                      "means": [c[1] for c in comps],
                      "h": hh_, "b": bb_, "kappa0_eto": keto})
    emit(f"rand{k}_kappa0_eto", keto)
print("# randomized instance parameters:")
print(json.dumps(instances, indent=2))

# Monotone-separation sweep for the b0 check: P_a = 0.5N(-a,1)+0.5N(a,1), h=1,b=3
for a in (0.0, 0.5, 1.0, 2.0):
    comps_a = [(0.5, -a, 1.0), (0.5, a, 1.0)]
    var_a = 1.0 + a * a
    gap2_a = abs(var_a - 1.0)
    ws_a = mix_quantile(0.75, comps_a)
    f_star_a = mix_pdf(ws_a, comps_a)
    Hs_a = 4.0 * f_star_a
    Ht_a = 4.0 * phi(Phi_inv(0.75))
    wkl_a = Phi_inv(0.75)
    gap3_a = abs(Hs_a - Ht_a)
    gap5_a = abs(Hs_a - 4.0 * mix_pdf(wkl_a, comps_a))
    F_sa = mix_cdf(ws_a, comps_a)
    vg_a = (1.0 * F_sa + 9.0 * (1 - F_sa)) - (F_sa - 3 * (1 - F_sa)) ** 2
    gap4_a = abs(vg_a - 3.0)
    b0_a = max(gap2_a, gap3_a, gap4_a, gap5_a)
    emit(f"b0_sweep_a{str(a).replace('.', 'p')}", b0_a)


with open(os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference_values.json"), "w") as fh:
    json.dump(OUT, fh, indent=2, sort_keys=True)
print("# wrote reference_values.json")
