"""Reference values for the reproduction harness.

Numbers are kept as the printed decimal strings so that the number of
significant digits shown is available to the comparison tolerance.
"""

# (N, rho, k, exact rho_k, large-N approximation)
TABLE1 = [
    (100, 0.25, 0, "0.754044", "0.75298"),
    (100, 0.5, 0, "0.513742", "0.512301"),
    (100, 0.75, 0, "0.288403", "0.264746"),
    (100, 0.25, 10, "2.6543e-7", "2.65056e-7"),
    (100, 0.5, 10, "0.000185182", "0.000184663"),
    (100, 0.75, 10, "0.00599468", "0.00550296"),
    (100, 0.25, 20, "1.24762e-14", "1.24586e-14"),
    (100, 0.5, 20, "8.91315e-9", "8.88815e-9"),
    (100, 0.75, 20, "0.0000166384", "0.0000152736"),
    (100, 0.25, 30, "7.3537e-23", "7.34332e-23"),
    (100, 0.5, 30, "5.37966e-14", "5.36457e-14"),
    (100, 0.75, 30, "5.7909e-9", "5.3159e-9"),
    (100, 0.25, 40, "4.84975e-32", "4.84291e-32"),
    (100, 0.5, 40, "3.63302e-20", "3.62283e-20"),
    (100, 0.75, 40, "2.25513e-13", "2.07015e-13"),
    (100, 0.25, 50, "2.98151e-42", "2.9773e-42"),
    (100, 0.5, 50, "2.2871e-27", "2.28068e-27"),
    (100, 0.75, 50, "8.18656e-19", "7.51505e-19"),
    (100, 0.25, 60, "1.28441e-53", "1.2826e-53"),
    (100, 0.5, 60, "1.00891e-35", "1.00608e-35"),
    (100, 0.75, 60, "2.08248e-25", "1.91166e-25"),
    (100, 0.25, 70, "2.44772e-66", "2.44427e-66"),
    (100, 0.5, 70, "1.96884e-45", "1.96332e-45"),
    (100, 0.75, 70, "2.34344e-33", "2.15121e-33"),
    (100, 0.25, 80, "9.19408e-81", "9.18111e-81"),
    (100, 0.5, 80, "7.57281e-57", "7.55157e-57"),
    (100, 0.75, 80, "5.19771e-43", "4.77136e-43"),
    (100, 0.25, 90, "1.21998e-97", "1.21826e-97"),
    (100, 0.5, 90, "1.02896e-70", "1.02608e-70"),
    (100, 0.75, 90, "4.07256e-55", "3.7385e-55"),
    (100, 0.25, 100, "5.18222e-120", "5.17491e-120"),
    (100, 0.5, 100, "4.47573e-90", "4.46318e-90"),
    (100, 0.75, 100, "1.02151e-72", "9.37724e-73"),
    (500, 0.25, 0, "0.75082", "0.750828"),
    (500, 0.5, 0, "0.502942", "0.502939"),
    (500, 0.75, 0, "0.2596", "0.2593"),
    (500, 0.25, 50, "3.97755e-33", "3.97755e-33"),
    (500, 0.5, 50, "2.99981e-18", "2.99979e-18"),
    (500, 0.75, 50, "9.87303e-10", "9.86145e-10"),
    (500, 0.25, 100, "8.58336e-70", "8.58336e-70"),
    (500, 0.5, 100, "7.28844e-40", "7.28844e-40"),
    (500, 0.75, 100, "1.52952e-22", "1.52772e-22"),
    (500, 0.25, 150, "5.48926e-111", "5.48926e-111"),
    (500, 0.5, 150, "5.24796e-66", "5.24793e-66"),
    (500, 0.75, 150, "7.02221e-40", "7.01398e-40"),
    (500, 0.25, 200, "5.83949e-157", "5.83949e-157"),
    (500, 0.5, 200, "6.28567e-97", "6.28563e-97"),
    (500, 0.75, 200, "5.36288e-62", "5.35659e-62"),
    (500, 0.25, 250, "4.09278e-208", "4.09278e-208"),
    (500, 0.5, 250, "4.96015e-133", "4.96012e-133"),
    (500, 0.75, 250, "2.69839e-89", "2.69522e-89"),
    (500, 0.25, 300, "4.42983e-265", "4.42983e-265"),
    (500, 0.5, 300, "6.04455e-175", "6.04451e-175"),
    (500, 0.75, 300, "2.0967e-122", "2.09424e-122"),
    (500, 0.25, 350, "7.0932955e-329", "7.0932949e-329"),
    (500, 0.5, 350, "1.08974e-223", "1.08974e-223"),
    (500, 0.75, 350, "2.41023e-162", "2.40741e-162"),
    (500, 0.25, 400, "2.65999780e-401", "2.65999756e-401"),
    (500, 0.5, 400, "4.60105e-281", "4.60102e-281"),
    (500, 0.75, 400, "6.48866e-211", "6.48105e-211"),
    (500, 0.25, 450, "3.10906376e-486", "3.10906348e-486"),
    (500, 0.5, 450, "6.054876e-351", "6.054838e-351"),
    (500, 0.75, 450, "5.4446e-272", "5.4382e-272"),
    (500, 0.25, 500, "2.5924940e-601", "2.5924937e-601"),
    (500, 0.5, 500, "5.68451e-451", "5.68447e-451"),
    (500, 0.75, 500, "3.2592e-363", "3.2554e-363"),
    (1000, 0.25, 0, "0.750415", "0.750415"),
    (1000, 0.5, 0, "0.501485", "0.501485"),
    (1000, 0.75, 0, "0.255005", "0.254963"),
    (1000, 0.25, 100, "2.09542e-65", "2.09542e-65"),
    (1000, 0.5, 100, "1.77512e-35", "1.77512e-35"),
    (1000, 0.75, 100, "3.66982e-18", "3.66922e-18"),
    (1000, 0.25, 200, "9.60904e-139", "9.60904e-139"),
    (1000, 0.5, 200, "1.0319e-78", "1.03189e-78"),
    (1000, 0.75, 200, "8.67317e-44", "8.67175e-44"),
    (1000, 0.25, 300, "3.8264e-221", "3.8264e-221"),
    (1000, 0.5, 300, "5.2089e-131", "5.20889e-131"),
    (1000, 0.75, 300, "1.77997e-78", "1.77968e-78"),
    (1000, 0.25, 400, "4.1605580e-313", "4.1605579e-313"),
    (1000, 0.5, 400, "7.1797e-193", "7.17969e-193"),
    (1000, 0.75, 400, "9.97471e-123", "9.97308e-123"),
    (1000, 0.25, 500, "1.931348071e-415", "1.931348049e-415"),
    (1000, 0.5, 500, "4.22488e-265", "4.22488e-265"),
    (1000, 0.75, 500, "2.38635e-177", "2.38596e-177"),
    (1000, 0.25, 600, "2.090294344e-529", "2.090294320e-529"),
    (1000, 0.5, 600, "5.7964397e-349", "5.7964350e-349"),
    (1000, 0.75, 600, "1.33109e-243", "1.33087e-243"),
    (1000, 0.25, 700, "4.78531360e-657", "4.78531355e-657"),
    (1000, 0.5, 700, "1.6821466e-446", "1.6821452e-446"),
    (1000, 0.75, 700, "1.57049e-323", "1.57023e-323"),
    (1000, 0.25, 800, "5.65614342e-802", "5.65614336e-802"),
    (1000, 0.5, 800, "2.5204229e-561", "2.5204209e-561"),
    (1000, 0.75, 800, "9.5668e-421", "9.5653e-421"),
    (1000, 0.25, 900, "5.62059564e-972", "5.62059558e-972"),
    (1000, 0.5, 900, "3.1749356e-701", "3.1749330e-701"),
    (1000, 0.75, 900, "4.8995e-543", "4.8987e-543"),
    (1000, 0.25, 1000, "3.191157888e-1203", "3.191157852e-1203"),
    (1000, 0.5, 1000, "2.2850749e-902", "2.2850730e-902"),
    (1000, 0.75, 1000, "1.43367e-726", "1.43343e-726"),
]

# N -> argmax of the stationary entropy over rho
TABLE2 = {2: 2.45, 4: 2.69, 6: 2.66, 8: 2.57, 10: 2.47, 15: 2.28, 20: 2.14, 30: 1.95}

# lam = mu = 1, alpha = 2, epsilon = 0.1, sigma2 = alpha N epsilon^2
TABLE3_PRESET = {"lam_mu": 1.0, "epsilon": 0.1, "N": (5000, 10000, 15000),
                 "k": (0, 1, 2, 3, 4, 5, 10, 20, 30, 40, 50)}

# (N, k, w(k eps) eps, rho_k, relative difference)
TABLE3 = [
    (5000, 0, "0.0159577", "0.015831", "0.00800385"),
    (5000, 1, "0.0159545", "0.0158278", "0.00800383"),
    (5000, 2, "0.0159449", "0.0158183", "0.00800377"),
    (5000, 3, "0.015929", "0.0158025", "0.00800366"),
    (5000, 4, "0.0159067", "0.0157804", "0.00800352"),
    (5000, 5, "0.0158781", "0.015752", "0.00800334"),
    (5000, 10, "0.0156417", "0.0155175", "0.00800184"),
    (5000, 20, "0.0147308", "0.014614", "0.007996"),
    (5000, 30, "0.013329", "0.0132234", "0.00798679"),
    (5000, 40, "0.0115877", "0.011496", "0.00797503"),
    (5000, 50, "0.00967883", "0.00960238", "0.00796185"),
    (10000, 0, "0.0112838", "0.0112203", "0.0056544"),
    (10000, 1, "0.0112827", "0.0112192", "0.00565439"),
    (10000, 2, "0.0112793", "0.0112159", "0.00565438"),
    (10000, 3, "0.0112736", "0.0112103", "0.00565435"),
    (10000, 4, "0.0112658", "0.0112024", "0.00565432"),
    (10000, 5, "0.0112556", "0.0111923", "0.00565427"),
    (10000, 10, "0.0111715", "0.0111087", "0.00565389"),
    (10000, 20, "0.0108413", "0.0107804", "0.00565241"),
    (10000, 30, "0.0103126", "0.0102547", "0.00565001"),
    (10000, 40, "0.00961541", "0.00956142", "0.00564678"),
    (10000, 50, "0.00878783", "0.00873852", "0.00564287"),
    (15000, 0, "0.00921318", "0.00917085", "0.00461492"),
    (15000, 1, "0.00921256", "0.00917024", "0.00461492"),
    (15000, 2, "0.00921072", "0.00916841", "0.00461491"),
    (15000, 3, "0.00920765", "0.00916535", "0.0046149"),
    (15000, 4, "0.00920336", "0.00916108", "0.0046149"),
    (15000, 5, "0.00919783", "0.00915558", "0.00461487"),
    (15000, 10, "0.009151196", "0.00910992", "0.0046147"),
    (15000, 20, "0.00897074", "0.00892954", "0.00461404"),
    (15000, 30, "0.00867664", "0.0086368", "0.00461295"),
    (15000, 40, "0.00828104", "0.00824302", "0.00461148"),
    (15000, 50, "0.00779879", "0.007763", "0.00460965"),
]
