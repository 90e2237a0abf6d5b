"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_backends.py --sizes 256,512,1024
"""
import argparse

from hdrfuse import kernels
from hdrfuse.bench import bench_backends, format_backends


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="256,512,1024")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    print("backends:", ", ".join(kernels.available_backends()))
    for n in (int(v) for v in args.sizes.split(",")):
        print()
        print(format_backends(bench_backends(n, args.repeats), n))


if __name__ == "__main__":
    main()
