from torus_ech.cli import main

main()
