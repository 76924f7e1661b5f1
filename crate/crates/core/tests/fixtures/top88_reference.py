"""Direct transcription of the public 88-line topology optimization code
(density filter variant, ft=2), run as an independent reference.

Usage: python3 top88_reference.py 60 20 0.5 3.0 2.4 > top88_60x20.json
"""
import json
import sys

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve


def top88(nelx, nely, volfrac, penal, rmin, maxloop=2000):
    E0, Emin, nu = 1.0, 1e-9, 0.3
    A11 = np.array([[12, 3, -6, -3], [3, 12, 3, 0], [-6, 3, 12, -3], [-3, 0, -3, 12]])
    A12 = np.array([[-6, -3, 0, 3], [-3, -6, -3, -6], [0, -3, -6, 3], [3, -6, 3, -6]])
    B11 = np.array([[-4, 3, -2, 9], [3, -4, -9, 4], [-2, -9, -4, -3], [9, 4, -3, -4]])
    B12 = np.array([[2, -3, 4, -9], [-3, 2, 9, -2], [4, 9, 2, 3], [-9, -2, 3, 2]])
    KE = 1 / (1 - nu**2) / 24 * (
        np.block([[A11, A12], [A12.T, A11]]) + nu * np.block([[B11, B12], [B12.T, B11]])
    )
    nodenrs = np.arange(1, (1 + nelx) * (1 + nely) + 1).reshape((1 + nely, 1 + nelx), order="F")
    edofVec = (2 * nodenrs[0:-1, 0:-1] + 1).reshape(nelx * nely, 1, order="F")
    edofMat = np.tile(edofVec, (1, 8)) + np.tile(
        np.array([0, 1, 2 * nely + 2, 2 * nely + 3, 2 * nely, 2 * nely + 1, -2, -1]), (nelx * nely, 1)
    )
    edofMat -= 1  # zero-based
    iK = np.kron(edofMat, np.ones((8, 1))).flatten().astype(int)
    jK = np.kron(edofMat, np.ones((1, 8))).flatten().astype(int)
    ndof = 2 * (nely + 1) * (nelx + 1)
    F = np.zeros(ndof)
    F[1] = -1.0
    U = np.zeros(ndof)
    fixeddofs = np.union1d(np.arange(0, 2 * (nely + 1), 2), np.array([ndof - 1]))
    freedofs = np.setdiff1d(np.arange(ndof), fixeddofs)
    # filter
    nfilter = int(nelx * nely * ((2 * (np.ceil(rmin) - 1) + 1) ** 2))
    iH = np.zeros(nfilter, dtype=int)
    jH = np.zeros(nfilter, dtype=int)
    sH = np.zeros(nfilter)
    k = 0
    for i1 in range(nelx):
        for j1 in range(nely):
            e1 = i1 * nely + j1
            for i2 in range(max(i1 - (int(np.ceil(rmin)) - 1), 0), min(i1 + int(np.ceil(rmin)), nelx)):
                for j2 in range(max(j1 - (int(np.ceil(rmin)) - 1), 0), min(j1 + int(np.ceil(rmin)), nely)):
                    e2 = i2 * nely + j2
                    iH[k] = e1
                    jH[k] = e2
                    sH[k] = max(0.0, rmin - np.sqrt((i1 - i2) ** 2 + (j1 - j2) ** 2))
                    k += 1
    H = coo_matrix((sH[:k], (iH[:k], jH[:k])), shape=(nelx * nely, nelx * nely)).tocsc()
    Hs = np.asarray(H.sum(1)).flatten()
    x = volfrac * np.ones(nely * nelx)
    xPhys = x.copy()
    loop = 0
    change = 1.0
    c = 0.0
    history = []
    while change > 0.01 and loop < maxloop:
        loop += 1
        sK = (KE.flatten()[np.newaxis]).T * (Emin + xPhys**penal * (E0 - Emin))
        K = coo_matrix((sK.flatten(order="F"), (iK, jK)), shape=(ndof, ndof)).tocsc()
        K = K[freedofs, :][:, freedofs]
        U[:] = 0
        U[freedofs] = spsolve(K, F[freedofs])
        ce = (np.dot(U[edofMat].reshape(nelx * nely, 8), KE) * U[edofMat].reshape(nelx * nely, 8)).sum(1)
        c = ((Emin + xPhys**penal * (E0 - Emin)) * ce).sum()
        dc = -penal * xPhys ** (penal - 1) * (E0 - Emin) * ce
        dv = np.ones(nely * nelx)
        dc = np.asarray(H * (dc / Hs))
        dv = np.asarray(H * (dv / Hs))
        l1, l2, move = 0.0, 1e9, 0.2
        while (l2 - l1) / (l1 + l2) > 1e-3:
            lmid = 0.5 * (l2 + l1)
            xnew = np.maximum(0.0, np.maximum(x - move, np.minimum(1.0, np.minimum(x + move, x * np.sqrt(-dc / dv / lmid)))))
            xPhys = np.asarray(H * xnew) / Hs
            if xPhys.sum() > volfrac * nelx * nely:
                l1 = lmid
            else:
                l2 = lmid
        change = np.abs(xnew - x).max()
        x = xnew
        history.append(c)
    return c, loop, history, xPhys


if __name__ == "__main__":
    nelx, nely = int(sys.argv[1]), int(sys.argv[2])
    volfrac, penal, rmin = float(sys.argv[3]), float(sys.argv[4]), float(sys.argv[5])
    c, loop, history, xPhys = top88(nelx, nely, volfrac, penal, rmin)
    json.dump(
        {
            "nelx": nelx,
            "nely": nely,
            "volfrac": volfrac,
            "penal": penal,
            "rmin": rmin,
            "final_compliance": c,
            "iterations": loop,
            "final_volume": float(xPhys.mean()),
        },
        sys.stdout,
        indent=2,
    )
    print()
