from sepsim.cli import main

main()
