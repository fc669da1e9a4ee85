"""Brute-force ground truth over finite fields and truncated p-adic rings."""
