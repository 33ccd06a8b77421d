from hvaudit.cli import main

raise SystemExit(main())
