#!/usr/bin/env python3
# Copyright 2026 The MQT Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the frozen H2 sample datasets under data/.

This is a one-off helper used to produce the checked-in files; the C++
project only reads the resulting mqt-ham-v1 JSON documents. Requires pyscf,
openfermion, numpy and scipy.

    python3 scripts/make_sample_dataset.py --basis 6-31g --out data/h2_631g_bk
"""

import argparse
import itertools
import json
import os

import numpy as np
import openfermion as of
import scipy.sparse.linalg
from pyscf import ao2mo, fci, gto, scf


def h2_geometry(r):
    return [("H", 1, (0.0, 0.0, -r / 2.0)), ("H", 1, (0.0, 0.0, r / 2.0))]


def qubit_hamiltonian(mol, mf):
    norb = mf.mo_coeff.shape[1]
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), norb)
    eri = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one, two = of.chem.molecular_data.spinorb_from_spatial(h1, eri)
    op = of.InteractionOperator(mol.energy_nuc(), one, 0.5 * two)
    return of.bravyi_kitaev(of.get_fermion_operator(op), n_qubits=2 * norb), 2 * norb


def word_of(term, n_qubits):
    chars = ["I"] * n_qubits
    for q, p in term:
        chars[q] = p
    return "".join(chars)


def hf_bitstring(n_qubits, n_elec):
    # BK number operators are diagonal; pick the basis state with the HF
    # occupation pattern (lowest n_elec spin orbitals filled).
    number_ops = []
    for p in range(n_qubits):
        number_ops.append(
            of.get_sparse_operator(
                of.bravyi_kitaev(of.FermionOperator(((p, 1), (p, 0))), n_qubits),
                n_qubits=n_qubits,
            ).diagonal().real
        )
    target = [1 if p < n_elec else 0 for p in range(n_qubits)]
    for bits in itertools.product([0, 1], repeat=n_qubits):
        idx = int("".join(map(str, bits)), 2)
        if all(round(number_ops[p][idx]) == target[p] for p in range(n_qubits)):
            return "".join(map(str, bits)), idx
    raise RuntimeError("no HF basis state found")


def generate(r, basis, mapping_name):
    geom = h2_geometry(r)
    mol = gto.M(
        atom=[(s, xyz) for s, _, xyz in geom], basis=basis, unit="Bohr", verbose=0
    )
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    if not mf.converged:
        raise RuntimeError(f"SCF not converged at r={r}")
    qop, n_qubits = qubit_hamiltonian(mol, mf)
    terms = []
    for term, coeff in sorted(qop.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if abs(coeff.imag) > 1e-12:
            raise RuntimeError(f"complex coefficient {coeff} at r={r}")
        if abs(coeff) < 1e-14:
            continue
        terms.append({"coeff": float(coeff.real), "word": word_of(term, n_qubits)})

    e_fci = fci.FCI(mf).kernel()[0]
    sparse = of.get_sparse_operator(qop, n_qubits=n_qubits)
    if n_qubits <= 10:
        e_min = float(np.linalg.eigvalsh(sparse.toarray()).min())
    else:
        e_min = float(scipy.sparse.linalg.eigsh(sparse, k=1, which="SA")[0][0])
    if abs(e_min - e_fci) > 1e-8:
        raise RuntimeError(f"Fock-space minimum {e_min} != FCI {e_fci} at r={r}")

    bits, idx = hf_bitstring(n_qubits, mol.nelectron)
    e_hf_diag = float(sparse[idx, idx].real)
    if abs(e_hf_diag - mf.e_tot) > 1e-8:
        raise RuntimeError(f"<HF|H|HF> {e_hf_diag} != HF {mf.e_tot} at r={r}")

    return {
        "schema": "mqt-ham-v1",
        "molecule": "H2",
        "basis": basis.upper(),
        "mapping": mapping_name,
        "n_qubits": n_qubits,
        "bond_length_bohr": r,
        "hf_bitstring": bits,
        "hf_energy_hartree": float(mf.e_tot),
        "reference_energy_hartree": float(e_fci),
        "nuclear_repulsion_hartree": float(mol.energy_nuc()),
        "nuclei": [
            {"symbol": s, "proton_number": z, "xyz_bohr": list(xyz)}
            for s, z, xyz in geom
        ],
        "electron_ids": [[1], [1]],
        "terms": terms,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--basis", default="6-31g")
    ap.add_argument("--out", required=True)
    ap.add_argument("--grid", default="0.05:5.0:0.05")
    ap.add_argument("--extra", type=float, nargs="*", default=[])
    args = ap.parse_args()
    lo, hi, step = (float(v) for v in args.grid.split(":"))
    count = int(round((hi - lo) / step)) + 1
    points = [round(lo + i * step, 10) for i in range(count)] + args.extra
    os.makedirs(args.out, exist_ok=True)
    for r in points:
        doc = generate(r, args.basis, "bravyi-kitaev")
        label = f"{r:.2f}" if abs(r * 100 - round(r * 100)) < 1e-9 else f"{r:.4f}"
        path = os.path.join(args.out, f"H2_r{label}.json")
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(path, doc["n_qubits"], len(doc["terms"]), doc["hf_energy_hartree"],
              doc["reference_energy_hartree"])


if __name__ == "__main__":
    main()
