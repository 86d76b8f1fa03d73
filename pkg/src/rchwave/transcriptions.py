"""Reference formulas for N(z, H) and the coefficients g_0 ... g_12 of G_b(x).

These are term-by-term transcriptions kept for auditing the derived
polynomials; nothing in the computation path depends on them.  Variables:
A, B, K, c (model constants), z, H (or b with H = b^2).

N_REFERENCE_HALF is the bracket of N = (1/2) * (...).

The printed g_8 has two adjacent terms "- 10 K b^2" and "90 K c" with no
operator between them; G_REFERENCE uses "- 10 K b^2 - 90 K c" and
G8_OPERATOR_GAP records the ambiguity so the audit can flag it.
"""

N_VARS = ("A", "B", "K", "c", "z", "H")
G_VARS = ("A", "B", "K", "c", "b")

N_REFERENCE_HALF = (
    '4*A^3*H^8*z^5 + 4*A^3*H^8*z^4 + 4*A^3*H^8*z^3 + 5*A^2*B*H^7*z^5 + 12*A^2*B*H^7*z^4 '
    '+ 12*A^2*B*H^7*z^3 + 2*A^2*B*H^7*z^2 - 6*A^2*H^6*z^6 + 12*A^2*H^6*z^3 '
    '- 7*A^2*H^5*K*z^5 - 7*A^2*H^5*K*z^4 - 7*A^2*H^5*K*z^3 + 2*A^2*H^5*K*z^2 '
    '+ 2*A^2*H^5*K*z + 2*A^2*H^5*K + 7*A^2*H^5*c*z^5 + 7*A^2*H^5*c*z^4 + 7*A^2*H^5*c*z^3 '
    '- 2*A^2*H^5*c*z^2 - 2*A^2*H^5*c*z - 2*A^2*H^5*c + 9*A*B^2*H^6*z^4 '
    '+ 12*A*B^2*H^6*z^3 + 6*A*B^2*H^6*z^2 - 11*A*B*H^5*z^5 + 14*A*B*H^5*z^3 '
    '+ 8*A*B*H^5*z^2 - 13*A*B*H^4*K*z^4 - 13*A*B*H^4*K*z^3 - 4*A*B*H^4*K*z^2 '
    '+ 2*A*B*H^4*K*z + 2*A*B*H^4*K + 13*A*B*H^4*c*z^4 + 13*A*B*H^4*c*z^3 '
    '+ 4*A*B*H^4*c*z^2 - 2*A*B*H^4*c*z - 2*A*B*H^4*c - 8*A*H^4*z^4 + 8*A*H^4*z^3 '
    '- 9*A*H^3*K*z^3 + 9*A*H^3*c*z^3 + A*H^2*K^2*z^2 + A*H^2*K^2*z + A*H^2*K^2 '
    '- 2*A*H^2*K*c*z^2 - 2*A*H^2*K*c*z - 2*A*H^2*K*c + A*H^2*c^2*z^2 + A*H^2*c^2*z '
    '+ A*H^2*c^2 + 4*B^3*H^5*z^3 + 4*B^3*H^5*z^2 - 5*B^2*H^4*z^4 + 10*B^2*H^4*z^2 '
    '- 6*B^2*H^3*K*z^3 - 6*B^2*H^3*K*z^2 + 6*B^2*H^3*c*z^3 + 6*B^2*H^3*c*z^2 '
    '- 6*B*H^3*z^3 + 6*B*H^3*z^2 - 6*B*H^2*K*z^2 - 2*B*H^2*K + 6*B*H^2*c*z^2 + 2*B*H^2*c '
    '+ 2*B*H*K^2*z + 2*B*H*K^2 - 4*B*H*K*c*z - 4*B*H*K*c + 2*B*H*c^2*z + 2*B*H*c^2 '
    '+ 2*H*K*z - 2*H*K - 2*H*c*z + 2*H*c + 3*K^2 - 6*K*c + 3*c^2'
)

G_REFERENCE = {
    0: (
        '2*c - 2*K + 2*B*c - 6*K*c + 2*A^2*K + 2*B*K^2 + A*c^2 - 2*A^2*c + 2*B*c^2 + 3*K^2 '
        '+ 3*c^2 - 2*A*B*c - 2*A*K*c - 4*B*K*c + A*K^2*c'
    ),
    2: (
        '16*A^2*K*b^10 - 16*A^2*b^10*c + 14*A*B*K*b^8 - 16*A*B*b^8*c + A*K^2*b^4*c '
        '+ 7*A*K^2*b^4 - 16*A*K*b^4*c + 8*A*b^4*c^2 + 14*B^2*b^2*c^2 + 16*B*K^2*b^2 '
        '- 12*B*K*b^4 - 32*B*K*b^2*c + 14*B*b^4*c + 2*B*b^2*c^2 + 21*K^2 - 2*K*b^2 - 42*K*c '
        '+ 12*b^2*c + 21*c^2'
    ),
    4: (
        '2*A^2*B*b^14 + 42*A^2*K*b^10 - 42*A^2*b^10*c + 6*A*B^2*b^12 + 36*A*B*K*b^8 '
        '+ 8*A*B*b^10 - 36*A*B*b^8*c + 21*A*K^2*b^4 - 42*A*K*b^4*c + 21*A*b^4*c^2 '
        '+ 4*B^3*b^10 - 6*B^2*K*b^6 + 10*B^2*b^8 + 6*B^2*b^6*c + 40*B*K^2*b^2 - 36*B*K*b^4 '
        '- 80*B*K*b^2*c + 6*B*b^6 + 36*B*b^4*c + 40*B*b^2*c^2 + 45*K^2 - 20*K*b^2 - 90*K*c '
        '+ 20*b^2*c + 45*c^2'
    ),
    6: (
        '4*A^3*b^16 + 20*A^2*B*b^14 + 61*A^2*K*b^10 + 12*A^2*b^12 - 61*A^2*b^10*c '
        '+ 36*A*B^2*b^12 + 31*A*B*K*b^8 + 46*A*B*b^10 - 31*A*B*b^8*c + 34*A*K^2*b^4 '
        '- 9*A*K*b^6 - 68*A*K*b^4*c + 8*A*b^8 + 9*A*b^6*c + 34*A*b^4*c^2 + 20*B^3*b^10 '
        '- 30*B^2*K*b^6 + 40*B^2*b^8 + 30*B^2*b^6*c + 60*B*K^2*b^2 - 64*B*K*b^4 '
        '- 120*B*K*b^2*c + 18*B*b^6 + 64*B*b^4*c + 60*B*b^2*c^2 + 60*K^2 - 20*K*b^2 '
        '- 120*K*c + 20*b^2*c + 60*c^2'
    ),
    8: (
        '16*A^3*b^16 + 60*A^2*B*b^14 + 34*A^2*K*b^10 + 36*A^2*b^12 - 34*A^2*b^10*c '
        '+ 81*A*B^2*b^12 - 26*A*B*K*b^8 + 90*A*B*b^10 + 26*A*B*b^8*c + 31*A*K^2*b^4 '
        '- 27*A*K*b^6 - 62*A*K*b^4*c + 16*A*b^8 + 27*A*b^6*c + 31*A*b^4*c^2 + 36*B^3*b^10 '
        '- 54*B^2*K*b^6 + 55*B^2*b^8 + 54*B^2*b^6*c + 50*B*K^2*b^2 - 66*B*K*b^4 '
        '- 100*B*K*b^2*c + 18*B*b^6 + 66*B*b^4*c + 50*B*b^2*c^2 + 45*K^2 - 10*K*b^2 - 90*K*c '
        '+ 10*b^2*c + 45*c^2'
    ),
    10: (
        '24*A^3*b^16 + 73*A^2*B*b^14 - 12*A^2*K*b^10 + 36*A^2*b^12 + 12*A^2*b^10*c '
        '+ 78*A*B^2*b^12 - 59*A*B*K*b^8 + 63*A*B*b^10 + 59*A*B*b^8*c + 15*A*K^2*b^4 '
        '- 27*A*K*b^6 - 30*A*K*b^4*c + 8*A*b^8 + 27*A*b^6*c + 15*A*b^4*c^2 + 28*B^3*b^10 '
        '- 42*B^2*K*b^6 + 30*B^2*b^8 + 42*B^2*b^6*c + 22*B*K^2*b^2 - 36*B*K*b^4 '
        '- 44*B*K*b^2*c + 6*B*b^6 + 36*B*b^4*c + 22*B*b^2*c^2 + 18*K^2 - 2*K*b^2 - 36*K*c '
        '+ 2*b^2*c + 18*c^2'
    ),
    12: (
        '12*A^3*b^16 + 31*A^2*B*b^14 - 15*A^2*K*b^10 + 6*A^2*b^12 + 15*A^2*b^10*c '
        '+ 27*A*B^2*b^12 - 26*A*B*K*b^8 + 11*A*B*b^10 + 26*A*B*b^8*c + 3*A*K^2*b^4 '
        '- 9*A*K*b^6 - 6*A*K*b^4*c + 9*A*b^6*c + 3*A*b^4*c^2 + 8*B^3*b^10 - 12*B^2*K*b^6 '
        '+ 5*B^2*b^8 + 12*B^2*b^6*c + 4*B*K^2*b^2 - 8*B*K*b^4 - 8*B*K*b^2*c + 8*B*b^4*c '
        '+ 4*B*b^2*c^2 + 3*K^2 - 6*K*c + 3*c^2'
    ),
}

G8_OPERATOR_GAP = {
    "printed": "- 10 K b^2 90 K c",
    "adopted": "- 10 K b^2 - 90 K c",
}
