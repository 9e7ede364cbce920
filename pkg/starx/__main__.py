from starx.cli import main

main()
