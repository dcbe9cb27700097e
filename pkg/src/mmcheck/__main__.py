from mmcheck.cli import main

main()
