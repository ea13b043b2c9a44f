import os
import errno
import datetime

import dateutil.tz
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from freq import wrap_phase


#############################
def timestamp():
    now = datetime.datetime.now(dateutil.tz.tzlocal())
    return now.strftime('%Y_%m_%d_%H_%M_%S')


def output_path(out, stem, ext):
    """out itself, or a timestamped file inside it when out is a directory."""
    if out is None:
        return None
    if os.path.isdir(out) or out.endswith(os.sep):
        mkdir_p(out)
        return os.path.join(out, '%s_%s.%s' % (stem, timestamp(), ext))
    parent = os.path.dirname(out)
    if parent:
        mkdir_p(parent)
    return out


#############################
def save_bode_plot(b1, b2, path, regions=(), crossings=()):
    """Magnitude and phase of both subsystems, ERs shaded, CB hits marked."""
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    for b in (b1, b2):
        ax_mag.semilogx(b.f, b.mag_db, label=b.label or None)
        ax_ph.semilogx(b.f, b.phase_deg, label=b.label or None)
    for r in regions:
        lo = max(r.f_lo, b1.f[0])
        hi = min(r.f_hi, b1.f[-1])
        if hi <= lo:
            continue
        for ax in (ax_mag, ax_ph):
            ax.axvspan(lo, hi, color='0.85', zorder=0)
    for c in crossings:
        if not c.at_zero:
            ax_ph.axvline(c.f, color='r' if c.kind == 'CC' else 'g', linestyle='--', linewidth=0.8)
    diff = wrap_phase(b1.phase_deg - b2.phase_deg)
    ax_ph.semilogx(b1.f, diff, color='0.4', linewidth=0.6, label='difference (wrapped)')
    for y in (-180, 180):
        ax_ph.axhline(y, color='k', linewidth=0.5)
    ax_mag.set_ylabel('magnitude, dB')
    ax_ph.set_ylabel('phase, deg')
    ax_ph.set_xlabel('frequency, Hz')
    ax_mag.legend(loc='best')
    ax_mag.grid(True, which='both', alpha=0.3)
    ax_ph.grid(True, which='both', alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format='svg')
    plt.close(fig)


def save_nyquist_plot(ratio, path):
    fig, ax = plt.subplots(figsize=(6, 6))
    ratio = np.asarray(ratio)
    ax.plot(ratio.real, ratio.imag, linewidth=0.8)
    ax.plot(ratio.real, -ratio.imag, linewidth=0.8, linestyle=':')
    ax.plot([-1.0], [0.0], 'r+', markersize=10)
    ax.set_xlabel('Re')
    ax.set_ylabel('Im')
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format='svg')
    plt.close(fig)


def mkdir_p(path):
    try:
        os.makedirs(path)
    except OSError as exc:  # Python >2.5
        if exc.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise
