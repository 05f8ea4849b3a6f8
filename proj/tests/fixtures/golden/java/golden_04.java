class Q {
	int a;
	int b;
	int f(int x){return x+a;}
	int g(int x,int y){return x*y-b;}
	int h(){
		int t=0;
		for(int i=0;i<4;i++)t+=f(i);
		return t;
	}
}
