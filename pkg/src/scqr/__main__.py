from scqr.cli import main

main()
