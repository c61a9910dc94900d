"""子空间内可满足性求解器命令行入口

    python main.py solve instances/k5_coloring.paf --algo brute
"""

from subspace_sat.cli import run

if __name__ == "__main__":
    run()
